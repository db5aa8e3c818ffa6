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
#include <span>
#include <string>
#include <vector>

#include "rigforge/mesh.h"

namespace rigforge {

struct RayHit {
  double distance = 0.0;
  Vec3 point = Vec3::Zero();
  std::uint32_t face = 0;
};

/// Hits sorted by distance. `grazing` is set when the ray still skimmed a
/// triangle (|direction . normal| < 1e-6) after the single jitter retry;
/// parity must not be read from such a ray.
struct RayCast {
  std::vector<RayHit> hits;
  bool grazing = false;
  Vec3 direction = Vec3::Zero();

  bool odd() const { return hits.size() % 2 == 1; }
};

inline constexpr double kGrazingCosine = 1e-6;
inline constexpr double kJitterRadians = 1e-4;
inline constexpr double kMinHitDistance = 1e-9;

/// Brute-force cast against every triangle. Hits closer than 1e-9 to each
/// other collapse to one (shared edges and vertices). A grazing ray is
/// rotated once by 1e-4 rad about `jitter_axis` (any perpendicular when
/// zero) and re-cast.
RayCast cast_ray_brute_force(const Mesh& mesh, const Vec3& origin,
                             const Vec3& direction,
                             const Vec3& jitter_axis = Vec3::Zero());

/// All hits of a ray from `origin` along unit `direction`, ascending.
std::vector<RayHit> intersect_ray(const Mesh& mesh, const Vec3& origin,
                                  const Vec3& direction);

/// Bounding-volume hierarchy over the mesh triangles. Produces the same
/// hits as cast_ray_brute_force.
class RayCaster {
 public:
  explicit RayCaster(const Mesh& mesh);

  RayCast cast(const Vec3& origin, const Vec3& direction,
               const Vec3& jitter_axis = Vec3::Zero()) const;

  /// True when a segment between the two points crosses no surface.
  bool same_region(const Vec3& a, const Vec3& b) const;

  /// Majority parity over 26 fixed directions (non-grazing rays only).
  bool is_interior(const Vec3& point) const;

  double scale() const { return scale_; }

 private:
  struct Triangle {
    Vec3 v0, e1, e2, normal;
  };
  struct Node {
    Vec3 lo, hi;
    std::uint32_t first = 0;  // leaf: first triangle; inner: left child
    std::uint32_t count = 0;  // leaf triangle count, 0 for inner nodes
    std::uint32_t right = 0;
  };

  void collect(const Vec3& origin, const Vec3& direction,
               std::vector<RayHit>& hits, bool& grazing) const;
  std::uint32_t build(std::uint32_t begin, std::uint32_t end,
                      std::vector<Vec3>& centroids);

  std::vector<Triangle> triangles_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  double scale_ = 1.0;
};

enum class SliceMode { kNearest, kAll, kParityRefined };

std::string to_string(SliceMode mode);
/// Accepts "nearest", "all", "parity" / "parity-refined".
SliceMode parse_slice_mode(const std::string& text);

struct SliceConfig {
  int slice_count = 32;
  int ray_count = 64;
  SliceMode mode = SliceMode::kParityRefined;

  /// Throws InvalidArgumentError unless slice_count >= 2 and ray_count >= 8.
  void validate() const;
};

/// Cutting plane: rays leave `origin` along cos(phi) u + sin(phi) v.
struct SlicePlane {
  Vec3 origin = Vec3::Zero();
  Vec3 normal = Vec3::UnitX();
  Vec3 u = Vec3::UnitY();
  Vec3 v = Vec3::UnitZ();

  Vec3 direction(int k, int ray_count) const;
  double angle_of(const Vec3& p) const;
};

struct PointGroup {
  std::vector<Vec3> points;
  Vec3 center = Vec3::Zero();
  bool parity_valid = false;
};

struct Slice {
  double axis_coordinate = 0.0;
  int ray_count = 0;
  SlicePlane plane;
  std::vector<PointGroup> groups;
};

/// Fraction of non-grazing in-plane rays from `point` with an odd hit count.
double interior_fraction(const RayCaster& caster, const Vec3& point,
                         const SlicePlane& plane, int ray_count);

/// Area of the star polygon formed by the group points around its center,
/// measured in the slice plane.
double group_area(const PointGroup& group, const SlicePlane& plane);
double group_radius(const PointGroup& group);

/// Parity refinement of one candidate slice center. From an interior
/// candidate the nearest hit of each odd ray forms a group and the midpoints
/// of later interior intervals (hits 2-3, 4-5, ...) become new candidates;
/// from an exterior candidate the midpoints of hit pairs 1-2, 3-4, ... do.
/// Rays of the wrong parity drop their nearest hit. Candidates sharing a
/// region with an earlier one are skipped and recursion stops at depth 3.
/// Groups are re-centered on their point mean and ordered by the in-plane
/// angle of their first point.
///
/// Throws NoInteriorFoundError when no group survives.
std::vector<PointGroup> refine_center(const RayCaster& caster,
                                      const Vec3& candidate,
                                      const SlicePlane& plane, int ray_count);
std::vector<PointGroup> refine_center(const Mesh& mesh, const Vec3& candidate,
                                      const SlicePlane& plane, int ray_count);

/// Slices a frame-aligned mesh perpendicular to x at slice_count evenly
/// spaced bin midpoints over its x range. Throws OpenMeshError when the mesh
/// is not closed.
std::vector<Slice> slice_mesh(const Mesh& aligned, const SliceConfig& config);
std::vector<Slice> slice_mesh(const Mesh& aligned, const RayCaster& caster,
                              const SliceConfig& config);

enum class PartKind { kTorso, kLimb };

struct ChainNode {
  int slice = 0;
  int group = 0;
  Vec3 center = Vec3::Zero();
  double area = 0.0;
  double radius = 0.0;
};

struct PartChain {
  PartKind kind = PartKind::kLimb;
  /// 0 for the torso, 1..k for limbs.
  int index = 0;
  std::vector<ChainNode> nodes;

  std::string label() const;
};

struct PartChains {
  std::vector<PartChain> chains;
  double median_spacing = 0.0;
  double adjacency_radius = 0.0;
  int slice_count = 0;

  std::size_t center_count() const;
};

/// Links group centers of adjacent slices into chains. Each group joins its
/// nearest predecessor within adjacency_multiplier x the median spacing.
/// When a group has several successors only a dominant one (at least half
/// the parent's area and twice the runner-up's) continues the chain; the
/// others start new chains. The torso is the chain holding the largest group
/// among chains longer than 25% of the slice count.
PartChains classify_parts(const std::vector<Slice>& slices,
                          double adjacency_multiplier = 1.5);

}  // namespace rigforge
