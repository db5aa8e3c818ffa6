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

#include "rigforge/distortion.h"

#include <algorithm>
#include <string>

#include "rigforge/errors.h"

namespace rigforge {

void DetectorConfig::validate() const {
  if (!(max_step_angle > 0.0) || !(max_step_angle <= angle_threshold)) {
    throw InvalidArgumentError(
        "detector needs 0 < max_step_angle <= angle_threshold");
  }
}

DistortionMeasure measure_distortion(const Mesh& rest, const Mesh& deformed,
                                     const SkinBinding& binding) {
  if (rest.vertices.size() != deformed.vertices.size() ||
      rest.faces != deformed.faces) {
    throw TopologyMismatchError("rest and deformed meshes differ in topology");
  }
  const auto before = vertex_curviness(rest).values;
  const auto after = vertex_curviness(deformed).values;
  const auto areas = vertex_areas(rest);

  DistortionMeasure out;
  double num = 0.0;
  double den = 0.0;
  std::map<std::uint32_t, std::pair<double, double>> bones;
  const bool bound = binding.bone_of_vertex.size() == rest.vertices.size();
  for (std::size_t v = 0; v < before.size(); ++v) {
    const double delta = std::abs(after[v] - before[v]);
    num += areas[v] * delta;
    den += areas[v];
    if (bound) {
      auto& acc = bones[binding.bone_of_vertex[v]];
      acc.first += areas[v] * delta;
      acc.second += areas[v];
    }
  }
  out.global = den > 0.0 ? num / den : 0.0;
  for (const auto& [bone, acc] : bones) {
    out.per_bone[bone] = acc.second > 0.0 ? acc.first / acc.second : 0.0;
  }
  return out;
}

std::vector<double> joint_rotation_angles(const DeformationCache& cache) {
  std::vector<double> angles;
  angles.reserve(cache.joints.size());
  for (const JointTransform& t : cache.joints) angles.push_back(t.u.norm());
  return angles;
}

std::vector<std::uint32_t> flag_joints(const std::vector<double>& angles,
                                       double threshold) {
  std::vector<std::uint32_t> flagged;
  for (std::uint32_t j = 0; j < angles.size(); ++j) {
    if (angles[j] > threshold) flagged.push_back(j);
  }
  return flagged;
}

int decomposition_steps(double max_angle, double max_step_angle) {
  return std::max(1, static_cast<int>(std::ceil(max_angle / max_step_angle - 1e-12)));
}

Vec3 screw_interpolate(const Quat& rotation, const Vec3& translation,
                       const Vec3& point, double fraction) {
  const Vec3 u = rotation_vector(rotation);
  const double angle = u.norm();
  if (angle < 1e-12) return point + fraction * translation;
  const Vec3 axis = u / angle;
  const double slide = translation.dot(axis);
  const Vec3 across = translation - slide * axis;
  const Vec3 center =
      0.5 * (across + axis.cross(across) / std::tan(0.5 * angle));
  const Eigen::AngleAxisd partial(fraction * angle, axis);
  return partial * (point - center) + center + fraction * slide * axis;
}

std::vector<ControlHandles> decompose_rotation(const ControlHandles& handles,
                                               const Skeleton& rest,
                                               const DeformationCache& cache,
                                               const DetectorConfig& config) {
  config.validate();
  check_handles(handles, rest.joints.size());
  const auto angles = joint_rotation_angles(cache);
  double worst = 0.0;
  for (auto j : flag_joints(angles, config.angle_threshold)) {
    worst = std::max(worst, angles[j]);
  }
  if (!(worst > config.angle_threshold)) return {};

  const int n = decomposition_steps(worst, config.max_step_angle);
  std::vector<ControlHandles> steps(n);
  for (int k = 1; k < n; ++k) {
    const double f = double(k) / n;
    for (const Handle& h : handles.handles) {
      const Vec3& p = rest.joints[h.joint];
      const Quat& r = cache.joints[h.joint].rotation;
      const Vec3 t = h.target - r * p;
      steps[k - 1].handles.push_back({h.joint, screw_interpolate(r, t, p, f)});
    }
  }
  steps[n - 1] = handles;
  return steps;
}

double resolve_tolerance(const DetectorConfig& config, const Mesh& rest) {
  if (config.distortion_tolerance > 0.0) return config.distortion_tolerance;
  const auto c = vertex_curviness(rest).values;
  double sum = 0.0;
  for (double x : c) sum += x;
  return c.empty() ? 0.0 : 0.15 * sum / double(c.size());
}

DecomposedResult apply_decomposed(const Mesh& mesh, const Skeleton& skeleton,
                                  const SkinBinding& binding,
                                  const std::vector<ControlHandles>& steps,
                                  const DetectorConfig& config, double alpha) {
  if (steps.empty()) throw InvalidArgumentError("no decomposition steps");
  config.validate();
  DecomposedResult out;
  out.mesh = mesh;
  out.pose = skeleton;
  for (const ControlHandles& step : steps) {
    const DeformationCache cache = solve_joint_transforms(out.pose, step, alpha);
    out.mesh = blend_vertices(out.mesh, binding, cache);
    out.pose.joints = cache.deformed_joints;
    out.pose.recompute_lengths();
  }
  out.cache = solve_joint_transforms(skeleton, steps.back(), alpha);

  const DistortionMeasure m = measure_distortion(mesh, out.mesh, binding);
  DistortionReport& r = out.report;
  r.global_distortion = m.global;
  r.per_region_distortion = m.per_bone;
  r.per_joint_angle = joint_rotation_angles(out.cache);
  r.flagged_joints = flag_joints(r.per_joint_angle, config.angle_threshold);
  r.steps_used = static_cast<int>(steps.size());
  r.distortion_tolerance = resolve_tolerance(config, mesh);
  r.within_tolerance = r.global_distortion <= r.distortion_tolerance;
  return out;
}

}  // namespace rigforge
