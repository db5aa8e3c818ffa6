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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rigforge/mesh.h"
#include "rigforge/principal_frame.h"
#include "rigforge/slicer.h"

namespace rigforge {

using Bone = std::array<std::uint32_t, 2>;

/// Joint/bone tree approximating the articulation of the mesh.
struct Skeleton {
  std::vector<Vec3> joints;
  std::vector<Bone> bones;
  std::uint32_t root = 0;
  std::vector<double> bone_lengths;
  /// Index of the part chain each joint came from (0 = torso); empty for
  /// hand-built skeletons.
  std::vector<int> joint_chain;

  std::size_t num_joints() const { return joints.size(); }
  std::size_t num_bones() const { return bones.size(); }

  void recompute_lengths();
};

/// Throws SkeletonError unless the bones form a spanning tree over the
/// joints, indices are valid, and cached lengths match the joints.
void check_skeleton(const Skeleton& skeleton);

struct SkeletonOptions {
  /// Interior centers bending less than this (degrees) are dropped.
  double angle_tolerance_deg = 10.0;
  /// Smooth each chain with smooth_centers before decimation.
  bool smooth = false;
  /// Limb ends further than this many median spacings from the torso
  /// surface are rejected.
  double attach_multiplier = 3.0;
};

/// Indices of the centers kept by decimate_chain; `keep` (optional, same
/// length) forces extra centers to stay.
std::vector<std::size_t> decimate_chain_indices(
    std::span<const Vec3> centers, double angle_tolerance_deg,
    std::span<const char> keep = {});

/// Keeps both endpoints and every interior center whose incoming and
/// outgoing segments deviate from a straight line by more than the
/// tolerance.
std::vector<Vec3> decimate_chain(std::span<const Vec3> centers,
                                 double angle_tolerance_deg = 10.0);

/// Catmull-Rom cubic Bezier through the centers, resampled at equal arc
/// length with the same count. Endpoints are kept exactly; fewer than four
/// centers pass through unchanged.
std::vector<Vec3> smooth_centers(std::span<const Vec3> centers);

/// Assembles the tree in the coordinates of `aligned_mesh`: the torso chain
/// becomes the trunk, each limb is hung from the trunk center nearest its
/// closer end, and the root is the trunk joint nearest the vertex centroid.
/// Throws SkeletonError for a limb that cannot be attached or a joint that
/// fails the interior parity test.
Skeleton build_skeleton(const PartChains& chains, const Mesh& aligned_mesh,
                        const SkeletonOptions& options = {});
Skeleton build_skeleton(const PartChains& chains, const Mesh& aligned_mesh,
                        const RayCaster& caster,
                        const SkeletonOptions& options = {});

/// Joint positions mapped from frame-local to world coordinates.
Skeleton skeleton_to_world(const Skeleton& local, const PrincipalFrame& frame);

/// Sum of bone lengths along the tree path between two joints.
double skeleton_path_distance(const Skeleton& skeleton, std::uint32_t a,
                              std::uint32_t b);

/// Row-major joints x joints table of path distances.
std::vector<double> path_distance_table(const Skeleton& skeleton);

}  // namespace rigforge
