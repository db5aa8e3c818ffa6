// Copyright 2026 The Rigforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rigforge/deform.h"

namespace rigforge {

DeformResult deform(const Mesh& mesh, const Skeleton& skeleton,
                    const SkinBinding& binding, const ControlHandles& handles,
                    const DeformOptions& options) {
  options.detector.validate();
  check_handles(handles, skeleton.joints.size());
  const DeformationCache cache =
      solve_joint_transforms(skeleton, handles, options.alpha);

  DeformResult out;
  if (options.decompose) {
    const auto steps =
        decompose_rotation(handles, skeleton, cache, options.detector);
    if (steps.size() >= 2) {
      DecomposedResult d = apply_decomposed(mesh, skeleton, binding, steps,
                                            options.detector, options.alpha);
      out.mesh = std::move(d.mesh);
      out.report = std::move(d.report);
      out.joints = std::move(d.pose.joints);
      return out;
    }
  }

  out.mesh = blend_vertices(mesh, binding, cache);
  out.joints = cache.deformed_joints;
  const DistortionMeasure m = measure_distortion(mesh, out.mesh, binding);
  DistortionReport& r = out.report;
  r.global_distortion = m.global;
  r.per_region_distortion = m.per_bone;
  r.per_joint_angle = joint_rotation_angles(cache);
  r.flagged_joints = flag_joints(r.per_joint_angle, options.detector.angle_threshold);
  r.steps_used = 1;
  r.distortion_tolerance = resolve_tolerance(options.detector, mesh);
  r.within_tolerance = r.global_distortion <= r.distortion_tolerance;
  return out;
}

}  // namespace rigforge
