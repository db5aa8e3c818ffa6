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

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "rigforge/mesh.h"
#include "rigforge/mls_deformer.h"
#include "rigforge/skeleton.h"
#include "rigforge/skin_binding.h"

namespace rigforge {

struct DetectorConfig {
  /// Joints rotating more than this (radians) are flagged.
  double angle_threshold = M_PI / 3.0;
  /// Largest rotation one decomposed step may carry.
  double max_step_angle = M_PI / 6.0;
  /// Acceptable global distortion; <= 0 means 0.15 x the rest mesh's mean
  /// curviness.
  double distortion_tolerance = 0.0;

  /// Throws InvalidArgumentError unless 0 < max_step_angle <= angle_threshold.
  void validate() const;
};

struct DistortionReport {
  double global_distortion = 0.0;
  /// Radians in [0, pi], indexed by joint.
  std::vector<double> per_joint_angle;
  /// Ascending joint indices with per_joint_angle above the threshold.
  std::vector<std::uint32_t> flagged_joints;
  /// Bone index -> mean distortion of the vertices bound to it.
  std::map<std::uint32_t, double> per_region_distortion;
  int steps_used = 1;
  double distortion_tolerance = 0.0;
  bool within_tolerance = true;
};

struct DistortionMeasure {
  double global = 0.0;
  std::map<std::uint32_t, double> per_bone;
};

/// Area-weighted mean over vertices of |curviness(deformed) -
/// curviness(rest)|, globally and per bound bone. Vertex areas come from
/// the rest mesh. Throws TopologyMismatchError unless both meshes share the
/// face list and vertex count.
DistortionMeasure measure_distortion(const Mesh& rest, const Mesh& deformed,
                                     const SkinBinding& binding);

/// |u_j| per joint.
std::vector<double> joint_rotation_angles(const DeformationCache& cache);

std::vector<std::uint32_t> flag_joints(const std::vector<double>& angles,
                                       double threshold);

/// ceil(angle / max_step) with a 1e-12 guard against round-off.
int decomposition_steps(double max_angle, double max_step_angle);

/// Position of a point moved by x -> R x + t after fraction f of the screw
/// motion (rotation about the screw axis by f * angle plus f of the axial
/// slide). f = 1 gives R p + t.
Vec3 screw_interpolate(const Quat& rotation, const Vec3& translation,
                       const Vec3& point, double fraction);

/// Splits a handle set whose largest flagged joint rotation exceeds the
/// threshold into n = ceil(angle / max_step) handle sets. Handle i follows
/// the screw motion of the rigid transform (R_j, q_i - R_j p_i), R_j being
/// the solved rotation at its joint, to fraction k / n. The last set equals
/// the input. Returns an empty list when nothing exceeds the threshold.
std::vector<ControlHandles> decompose_rotation(const ControlHandles& handles,
                                               const Skeleton& rest,
                                               const DeformationCache& cache,
                                               const DetectorConfig& config);

struct DecomposedResult {
  Mesh mesh;
  DistortionReport report;
  /// Skeleton advanced through every step.
  Skeleton pose;
  /// Single-shot solve of the final handles against the rest skeleton.
  DeformationCache cache;
};

/// Applies the handle sets in order, each solved against the skeleton pose
/// and mesh produced by the previous step. Distortion is measured against
/// the original rest mesh.
DecomposedResult apply_decomposed(const Mesh& mesh, const Skeleton& skeleton,
                                  const SkinBinding& binding,
                                  const std::vector<ControlHandles>& steps,
                                  const DetectorConfig& config,
                                  double alpha = 2.0);

/// 0.15 x mean vertex curviness of `rest`, or the configured tolerance.
double resolve_tolerance(const DetectorConfig& config, const Mesh& rest);

}  // namespace rigforge
