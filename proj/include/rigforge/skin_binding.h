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
#include <set>
#include <vector>

#include "rigforge/mesh.h"
#include "rigforge/skeleton.h"

namespace rigforge {

struct JointWeight {
  std::uint32_t joint = 0;
  double weight = 0.0;
};

/// Per-vertex bone attachment and sparse joint influence weights.
struct SkinBinding {
  std::vector<std::uint32_t> bone_of_vertex;
  /// Distance from the vertex to its bone segment.
  std::vector<double> bone_distance;
  /// Attachment point as a fraction along bone (first -> second joint).
  std::vector<double> bone_param;
  /// Sorted by joint index; empty until compute_weights.
  std::vector<std::vector<JointWeight>> weights;
  int influence_radius_joints = 4;
};

inline constexpr double kWeightEpsilon = 1e-8;

/// Attaches every vertex to the bone segment closest in Euclidean distance,
/// ties going to the lower bone index.
SkinBinding bind_vertices(const Mesh& mesh, const Skeleton& skeleton);

/// Inverse-distance weights 1 / (d^alpha + 1e-8) over the
/// `influence_radius_joints` closest joints, normalized to sum to one. The
/// distance to joint j is the hop from the vertex to its attachment point
/// plus the shortest on-skeleton route from that point to j.
SkinBinding compute_weights(const Mesh& mesh, const Skeleton& skeleton,
                            SkinBinding binding, double alpha = 2.0);

/// Sharpens the weights of vertices bound to `stiff_bones` by raising them
/// to `stiffness` and renormalizing. Stiffness 1 returns the input unchanged.
SkinBinding rigidity_profile(const SkinBinding& binding,
                             const std::set<std::uint32_t>& stiff_bones,
                             double stiffness, std::size_t bone_count);

/// Throws InvalidArgumentError unless every vertex has at least one
/// influence, weights are nonnegative, reference valid joints, and sum to
/// one within `tolerance`.
void check_binding(const SkinBinding& binding, std::size_t vertex_count,
                   std::size_t joint_count, double tolerance = 1e-9);

}  // namespace rigforge
