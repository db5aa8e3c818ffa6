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

#include <cstdint>
#include <vector>

#include "rigforge/linalg.h"
#include "rigforge/mesh.h"
#include "rigforge/skeleton.h"
#include "rigforge/skin_binding.h"

namespace rigforge {

/// A joint dragged to a target position. Its rest position is the joint's
/// position in the skeleton being solved against.
struct Handle {
  std::uint32_t joint = 0;
  Vec3 target = Vec3::Zero();
};

struct ControlHandles {
  std::vector<Handle> handles;
};

/// Throws InvalidPoseError for an empty set, an out-of-range joint, or a
/// joint used twice.
void check_handles(const ControlHandles& handles, std::size_t joint_count);

/// Handles that leave every listed joint at its rest position.
ControlHandles rest_handles(const Skeleton& skeleton,
                            const std::vector<std::uint32_t>& joints);

struct JointTransform {
  Vec3 p_star = Vec3::Zero();
  Vec3 q_star = Vec3::Zero();
  Quat rotation = Quat::Identity();
  /// Rotation vector (axis * angle), |u| in [0, pi].
  Vec3 u = Vec3::Zero();
  /// q_star - rotation * p_star.
  Vec3 translation = Vec3::Zero();
  int rank = 0;

  Vec3 apply(const Vec3& x) const { return rotation * (x - p_star) + q_star; }
};

struct DeformationCache {
  std::vector<JointTransform> joints;
  std::vector<Vec3> deformed_joints;
  /// Set when some joint's handle configuration was rank deficient and the
  /// rotation came from the minimal-motion fallback.
  bool degenerate = false;
};

inline constexpr double kMlsEpsilon = 1e-8;

/// Rigid moving-least-squares solve at every joint. Handle i weighs
/// 1 / (D(j, i)^(2 alpha) + 1e-8), D being the skeleton path distance.
DeformationCache solve_joint_transforms(const Skeleton& skeleton,
                                        const ControlHandles& handles,
                                        double alpha = 2.0);

/// Linear blend skinning: each vertex moves to sum_j w_j T_j(v). Faces are
/// copied unchanged.
Mesh blend_vertices(const Mesh& mesh, const SkinBinding& binding,
                    const DeformationCache& cache);

}  // namespace rigforge
