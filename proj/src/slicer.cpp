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

#include "rigforge/slicer.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>

#include <Eigen/Geometry>

#include "rigforge/errors.h"
#include "rigforge/parallel.h"

namespace rigforge {

namespace {

enum class TriangleHit { kMiss, kHit, kGrazing };

// Moller-Trumbore with inclusive edges. A ray lying exactly in the plane of
// a triangle that it crosses is reported as grazing.
TriangleHit intersect_triangle(const Vec3& o, const Vec3& d, const Vec3& v0,
                               const Vec3& e1, const Vec3& e2,
                               const Vec3& normal, double plane_tol,
                               double& t) {
  constexpr double kBaryTol = 1e-12;
  const Vec3 p = d.cross(e2);
  const double det = e1.dot(p);
  if (det == 0.0) {
    if (normal.isZero() || std::abs((o - v0).dot(normal)) > plane_tol) {
      return TriangleHit::kMiss;
    }
    const Vec3 corners[3] = {v0, v0 + e1, v0 + e2};
    for (int k = 0; k < 3; ++k) {
      const Vec3& a = corners[k];
      const Vec3 edge = corners[(k + 1) % 3] - a;
      const double denom = d.cross(edge).dot(normal);
      if (denom == 0.0) continue;
      const double te = (a - o).cross(edge).dot(normal) / denom;
      const double se = (a - o).cross(d).dot(normal) / denom;
      if (te > kMinHitDistance && se >= 0.0 && se <= 1.0) {
        t = te;
        return TriangleHit::kGrazing;
      }
    }
    return TriangleHit::kMiss;
  }
  const double inv = 1.0 / det;
  const Vec3 s = o - v0;
  const double u = s.dot(p) * inv;
  if (u < -kBaryTol || u > 1.0 + kBaryTol) return TriangleHit::kMiss;
  const Vec3 q = s.cross(e1);
  const double v = d.dot(q) * inv;
  if (v < -kBaryTol || u + v > 1.0 + kBaryTol) return TriangleHit::kMiss;
  t = e2.dot(q) * inv;
  if (t <= kMinHitDistance) return TriangleHit::kMiss;
  if (std::abs(d.dot(normal)) < kGrazingCosine) return TriangleHit::kGrazing;
  return TriangleHit::kHit;
}

void sort_and_merge(std::vector<RayHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.face < b.face;
  });
  std::vector<RayHit> merged;
  merged.reserve(hits.size());
  for (const RayHit& h : hits) {
    if (merged.empty() || h.distance - merged.back().distance > 1e-9) {
      merged.push_back(h);
    }
  }
  hits = std::move(merged);
}

Vec3 jittered(const Vec3& d, const Vec3& axis_hint) {
  Vec3 axis = axis_hint - axis_hint.dot(d) * d;
  if (axis.norm() < 1e-12) {
    Eigen::Index k = 0;
    d.cwiseAbs().minCoeff(&k);
    axis = d.cross(Vec3::Unit(k));
  }
  return Eigen::AngleAxisd(kJitterRadians, axis.normalized()) * d;
}

double mesh_scale(const Mesh& mesh) {
  return std::max(bounding_diagonal(mesh), 1e-300);
}

template <typename Collect>
RayCast cast_with_retry(const Vec3& origin, const Vec3& direction,
                        const Vec3& jitter_axis, Collect&& collect) {
  RayCast cast;
  cast.direction = direction.normalized();
  bool grazing = false;
  collect(origin, cast.direction, cast.hits, grazing);
  if (grazing) {
    cast.direction = jittered(cast.direction, jitter_axis);
    cast.hits.clear();
    grazing = false;
    collect(origin, cast.direction, cast.hits, grazing);
    cast.grazing = grazing;
  }
  sort_and_merge(cast.hits);
  return cast;
}

}  // namespace

RayCast cast_ray_brute_force(const Mesh& mesh, const Vec3& origin,
                             const Vec3& direction, const Vec3& jitter_axis) {
  const double plane_tol = 1e-12 * mesh_scale(mesh);
  return cast_with_retry(
      origin, direction, jitter_axis,
      [&](const Vec3& o, const Vec3& d, std::vector<RayHit>& hits,
          bool& grazing) {
        for (std::uint32_t f = 0; f < mesh.faces.size(); ++f) {
          const Face& tri = mesh.faces[f];
          const Vec3& v0 = mesh.vertices[tri[0]];
          const Vec3 e1 = mesh.vertices[tri[1]] - v0;
          const Vec3 e2 = mesh.vertices[tri[2]] - v0;
          const Vec3 n = e1.cross(e2).normalized();
          double t = 0.0;
          switch (intersect_triangle(o, d, v0, e1, e2, n, plane_tol, t)) {
            case TriangleHit::kHit:
              hits.push_back({t, o + t * d, f});
              break;
            case TriangleHit::kGrazing:
              grazing = true;
              break;
            case TriangleHit::kMiss:
              break;
          }
        }
      });
}

std::vector<RayHit> intersect_ray(const Mesh& mesh, const Vec3& origin,
                                  const Vec3& direction) {
  return cast_ray_brute_force(mesh, origin, direction).hits;
}

RayCaster::RayCaster(const Mesh& mesh) : scale_(mesh_scale(mesh)) {
  const std::size_t n = mesh.faces.size();
  triangles_.reserve(n);
  std::vector<Vec3> centroids(n);
  for (std::size_t f = 0; f < n; ++f) {
    const Face& tri = mesh.faces[f];
    const Vec3& v0 = mesh.vertices[tri[0]];
    const Vec3 e1 = mesh.vertices[tri[1]] - v0;
    const Vec3 e2 = mesh.vertices[tri[2]] - v0;
    triangles_.push_back({v0, e1, e2, e1.cross(e2).normalized()});
    centroids[f] = v0 + (e1 + e2) / 3.0;
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  if (n > 0) {
    nodes_.reserve(2 * n);
    build(0, static_cast<std::uint32_t>(n), centroids);
  }
}

std::uint32_t RayCaster::build(std::uint32_t begin, std::uint32_t end,
                               std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Vec3 lo = Vec3::Constant(INFINITY);
  Vec3 hi = Vec3::Constant(-INFINITY);
  Vec3 clo = lo;
  Vec3 chi = hi;
  for (std::uint32_t i = begin; i < end; ++i) {
    const Triangle& t = triangles_[order_[i]];
    for (const Vec3& p : {t.v0, Vec3(t.v0 + t.e1), Vec3(t.v0 + t.e2)}) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    clo = clo.cwiseMin(centroids[order_[i]]);
    chi = chi.cwiseMax(centroids[order_[i]]);
  }
  const double pad = 1e-9 * scale_;
  nodes_[index].lo = lo.array() - pad;
  nodes_[index].hi = hi.array() + pad;
  if (end - begin <= 4) {
    nodes_[index].first = begin;
    nodes_[index].count = end - begin;
    return index;
  }
  Eigen::Index axis = 0;
  (chi - clo).maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = centroids[a][axis];
                     const double cb = centroids[b][axis];
                     return ca != cb ? ca < cb : a < b;
                   });
  const std::uint32_t left = build(begin, mid, centroids);
  const std::uint32_t right = build(mid, end, centroids);
  nodes_[index].first = left;
  nodes_[index].right = right;
  nodes_[index].count = 0;
  return index;
}

void RayCaster::collect(const Vec3& o, const Vec3& d, std::vector<RayHit>& hits,
                        bool& grazing) const {
  if (nodes_.empty()) return;
  const double plane_tol = 1e-12 * scale_;
  Vec3 inv;
  for (int k = 0; k < 3; ++k) inv[k] = 1.0 / d[k];
  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    double tmin = 0.0;
    double tmax = INFINITY;
    bool miss = false;
    for (int k = 0; k < 3 && !miss; ++k) {
      if (d[k] == 0.0) {
        if (o[k] < node.lo[k] || o[k] > node.hi[k]) miss = true;
        continue;
      }
      double t0 = (node.lo[k] - o[k]) * inv[k];
      double t1 = (node.hi[k] - o[k]) * inv[k];
      if (t0 > t1) std::swap(t0, t1);
      tmin = std::max(tmin, t0);
      tmax = std::min(tmax, t1);
      if (tmin > tmax) miss = true;
    }
    if (miss) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t f = order_[i];
        const Triangle& tri = triangles_[f];
        double t = 0.0;
        switch (intersect_triangle(o, d, tri.v0, tri.e1, tri.e2, tri.normal,
                                   plane_tol, t)) {
          case TriangleHit::kHit:
            hits.push_back({t, o + t * d, f});
            break;
          case TriangleHit::kGrazing:
            grazing = true;
            break;
          case TriangleHit::kMiss:
            break;
        }
      }
    } else {
      stack[top++] = node.first;
      stack[top++] = node.right;
    }
  }
}

RayCast RayCaster::cast(const Vec3& origin, const Vec3& direction,
                        const Vec3& jitter_axis) const {
  return cast_with_retry(
      origin, direction, jitter_axis,
      [&](const Vec3& o, const Vec3& d, std::vector<RayHit>& hits,
          bool& grazing) { collect(o, d, hits, grazing); });
}

bool RayCaster::same_region(const Vec3& a, const Vec3& b) const {
  const Vec3 delta = b - a;
  const double length = delta.norm();
  if (length <= 1e-12 * scale_) return true;
  const RayCast c = cast(a, delta / length);
  if (c.grazing) return false;
  return c.hits.empty() || c.hits.front().distance >= length - 1e-9;
}

bool RayCaster::is_interior(const Vec3& point) const {
  // Fixed generic rotation keeps the probe directions off coordinate planes.
  static const Mat3 tilt =
      (Eigen::AngleAxisd(0.3141, Vec3(0.48, 0.6, 0.64).normalized()))
          .toRotationMatrix();
  int odd = 0;
  int valid = 0;
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      for (int k = -1; k <= 1; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        const RayCast c = cast(point, tilt * Vec3(i, j, k).normalized());
        if (c.grazing) continue;
        ++valid;
        odd += c.odd();
      }
    }
  }
  return valid > 0 && 2 * odd > valid;
}

std::string to_string(SliceMode mode) {
  switch (mode) {
    case SliceMode::kNearest:
      return "nearest";
    case SliceMode::kAll:
      return "all";
    case SliceMode::kParityRefined:
      return "parity";
  }
  return "parity";
}

SliceMode parse_slice_mode(const std::string& text) {
  if (text == "nearest") return SliceMode::kNearest;
  if (text == "all") return SliceMode::kAll;
  if (text == "parity" || text == "parity-refined") {
    return SliceMode::kParityRefined;
  }
  throw InvalidArgumentError("unknown slice mode '" + text + "'");
}

void SliceConfig::validate() const {
  if (slice_count < 2) throw InvalidArgumentError("slice_count must be >= 2");
  if (ray_count < 8) throw InvalidArgumentError("ray_count must be >= 8");
}

Vec3 SlicePlane::direction(int k, int ray_count) const {
  const double phi = 2.0 * M_PI * k / ray_count;
  return (std::cos(phi) * u + std::sin(phi) * v).normalized();
}

double SlicePlane::angle_of(const Vec3& p) const {
  const Vec3 r = p - origin;
  return std::atan2(r.dot(v), r.dot(u));
}

namespace {

std::vector<RayCast> cast_fan(const RayCaster& caster, const Vec3& from,
                              const SlicePlane& plane, int ray_count) {
  std::vector<RayCast> casts(ray_count);
  for (int k = 0; k < ray_count; ++k) {
    casts[k] = caster.cast(from, plane.direction(k, ray_count), plane.normal);
  }
  return casts;
}

double odd_fraction(const std::vector<RayCast>& casts) {
  int valid = 0;
  int odd = 0;
  for (const RayCast& c : casts) {
    if (c.grazing) continue;
    ++valid;
    odd += c.odd();
  }
  return valid > 0 ? double(odd) / valid : 0.0;
}

std::vector<Vec3> nearest_of_odd(const std::vector<RayCast>& casts) {
  std::vector<Vec3> pts;
  for (const RayCast& c : casts) {
    if (!c.grazing && c.odd()) pts.push_back(c.hits.front().point);
  }
  return pts;
}

Vec3 mean_of(const std::vector<Vec3>& pts) {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : pts) sum += p;
  return sum / double(pts.size());
}

// Nearest-hit group around an interior point, re-centered on its own point
// mean until it stops moving.
std::optional<PointGroup> settle_group(const RayCaster& caster,
                                       std::vector<RayCast> casts,
                                       const SlicePlane& plane, int ray_count) {
  std::vector<Vec3> pts = nearest_of_odd(casts);
  if (pts.size() < 3) return std::nullopt;
  Vec3 origin = mean_of(pts);
  for (int iter = 0; iter < 4; ++iter) {
    auto next_casts = cast_fan(caster, origin, plane, ray_count);
    if (odd_fraction(next_casts) < 0.5) break;
    auto next = nearest_of_odd(next_casts);
    if (next.size() < 3) break;
    pts = std::move(next);
    const Vec3 moved = mean_of(pts);
    const bool settled = (moved - origin).norm() <= 1e-9 * caster.scale();
    origin = moved;
    if (settled) break;
  }
  PointGroup group;
  group.points = std::move(pts);
  group.center = mean_of(group.points);
  group.parity_valid =
      interior_fraction(caster, group.center, plane, ray_count) >= 0.9;
  return group;
}

PointGroup plain_group(const RayCaster& caster, std::vector<Vec3> pts,
                       const SlicePlane& plane, int ray_count) {
  PointGroup group;
  group.points = std::move(pts);
  group.center = mean_of(group.points);
  group.parity_valid =
      interior_fraction(caster, group.center, plane, ray_count) >= 0.9;
  return group;
}

void order_groups(std::vector<PointGroup>& groups, const SlicePlane& plane) {
  std::stable_sort(groups.begin(), groups.end(),
                   [&](const PointGroup& a, const PointGroup& b) {
                     return plane.angle_of(a.points.front()) <
                            plane.angle_of(b.points.front());
                   });
}

}  // namespace

double interior_fraction(const RayCaster& caster, const Vec3& point,
                         const SlicePlane& plane, int ray_count) {
  return odd_fraction(cast_fan(caster, point, plane, ray_count));
}

double group_area(const PointGroup& group, const SlicePlane& plane) {
  std::vector<std::pair<double, Eigen::Vector2d>> ring;
  for (const Vec3& p : group.points) {
    const Vec3 r = p - group.center;
    const Eigen::Vector2d q(r.dot(plane.u), r.dot(plane.v));
    ring.emplace_back(std::atan2(q.y(), q.x()), q);
  }
  std::sort(ring.begin(), ring.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& a = ring[i].second;
    const auto& b = ring[(i + 1) % ring.size()].second;
    twice += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * std::abs(twice);
}

double group_radius(const PointGroup& group) {
  double sum = 0.0;
  for (const Vec3& p : group.points) sum += (p - group.center).norm();
  return group.points.empty() ? 0.0 : sum / double(group.points.size());
}

std::vector<PointGroup> refine_center(const RayCaster& caster,
                                      const Vec3& candidate,
                                      const SlicePlane& plane, int ray_count) {
  constexpr int kMaxDepth = 3;
  struct Pending {
    Vec3 point;
    int depth;
  };
  std::deque<Pending> queue{{candidate, 0}};
  std::vector<Vec3> visited;
  std::vector<PointGroup> groups;

  auto known = [&](const Vec3& p) {
    for (const Vec3& r : visited) {
      if (caster.same_region(p, r)) return true;
    }
    for (const Pending& q : queue) {
      if (caster.same_region(p, q.point)) return true;
    }
    return false;
  };

  while (!queue.empty()) {
    const Pending current = queue.front();
    queue.pop_front();
    bool seen = false;
    for (const Vec3& r : visited) {
      if (caster.same_region(current.point, r)) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    visited.push_back(current.point);

    auto casts = cast_fan(caster, current.point, plane, ray_count);
    const bool interior = odd_fraction(casts) > 0.5;
    std::vector<Vec3> spawned;
    for (const RayCast& c : casts) {
      if (c.grazing || c.odd() != interior) continue;
      for (std::size_t m = interior ? 1 : 0; m + 1 < c.hits.size(); m += 2) {
        spawned.push_back(0.5 * (c.hits[m].point + c.hits[m + 1].point));
      }
    }
    if (interior) {
      if (auto group = settle_group(caster, casts, plane, ray_count)) {
        // Re-centering can carry a candidate into a region that already
        // holds a group.
        const bool duplicate = std::any_of(
            groups.begin(), groups.end(), [&](const PointGroup& g) {
              return caster.same_region(g.center, group->center);
            });
        if (group->parity_valid && !duplicate) {
          visited.push_back(group->center);
          groups.push_back(std::move(*group));
        }
      }
    }
    if (current.depth < kMaxDepth) {
      for (const Vec3& s : spawned) {
        if (!known(s)) queue.push_back({s, current.depth + 1});
      }
    }
  }
  if (groups.empty()) {
    throw NoInteriorFoundError("no interior slice center found");
  }
  order_groups(groups, plane);
  return groups;
}

std::vector<PointGroup> refine_center(const Mesh& mesh, const Vec3& candidate,
                                      const SlicePlane& plane, int ray_count) {
  return refine_center(RayCaster(mesh), candidate, plane, ray_count);
}

std::vector<Slice> slice_mesh(const Mesh& aligned, const SliceConfig& config) {
  return slice_mesh(aligned, RayCaster(aligned), config);
}

std::vector<Slice> slice_mesh(const Mesh& aligned, const RayCaster& caster,
                              const SliceConfig& config) {
  config.validate();
  const TopologyReport topo = validate_topology(aligned);
  if (!topo.is_closed) {
    throw OpenMeshError("mesh is not closed (" +
                        std::to_string(topo.boundary_edge_count) +
                        " boundary edges, " +
                        std::to_string(topo.non_manifold_edge_count) +
                        " non-manifold edges)");
  }
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const Vec3& v : aligned.vertices) {
    lo = std::min(lo, v.x());
    hi = std::max(hi, v.x());
  }
  const int n = config.slice_count;
  std::vector<Slice> slices(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
    Slice& slice = slices[k];
    slice.axis_coordinate = lo + (double(k) + 0.5) * (hi - lo) / n;
    slice.ray_count = config.ray_count;
    slice.plane.origin = Vec3(slice.axis_coordinate, 0.0, 0.0);
    switch (config.mode) {
      case SliceMode::kParityRefined:
        try {
          slice.groups = refine_center(caster, slice.plane.origin, slice.plane,
                                       config.ray_count);
        } catch (const NoInteriorFoundError&) {
        }
        break;
      case SliceMode::kNearest:
      case SliceMode::kAll: {
        const auto casts =
            cast_fan(caster, slice.plane.origin, slice.plane, config.ray_count);
        std::vector<Vec3> pts;
        for (const RayCast& c : casts) {
          if (c.grazing || c.hits.empty()) continue;
          if (config.mode == SliceMode::kNearest) {
            pts.push_back(c.hits.front().point);
          } else {
            for (const RayHit& h : c.hits) pts.push_back(h.point);
          }
        }
        if (pts.size() >= 3) {
          slice.groups.push_back(plain_group(caster, std::move(pts),
                                             slice.plane, config.ray_count));
        }
        break;
      }
    }
  });
  return slices;
}

std::string PartChain::label() const {
  return kind == PartKind::kTorso ? std::string("torso")
                                  : "limb_" + std::to_string(index);
}

std::size_t PartChains::center_count() const {
  std::size_t n = 0;
  for (const PartChain& c : chains) n += c.nodes.size();
  return n;
}

PartChains classify_parts(const std::vector<Slice>& slices,
                          double adjacency_multiplier) {
  PartChains result;
  result.slice_count = static_cast<int>(slices.size());

  std::vector<std::vector<ChainNode>> nodes(slices.size());
  for (std::size_t s = 0; s < slices.size(); ++s) {
    for (std::size_t g = 0; g < slices[s].groups.size(); ++g) {
      const PointGroup& group = slices[s].groups[g];
      nodes[s].push_back({static_cast<int>(s), static_cast<int>(g),
                          group.center, group_area(group, slices[s].plane),
                          group_radius(group)});
    }
  }

  // Nearest predecessor of every group and its distance.
  std::vector<std::vector<int>> parent(slices.size());
  std::vector<double> gaps;
  for (std::size_t s = 0; s < slices.size(); ++s) {
    parent[s].assign(nodes[s].size(), -1);
    if (s == 0) continue;
    for (std::size_t g = 0; g < nodes[s].size(); ++g) {
      double best = INFINITY;
      for (std::size_t h = 0; h < nodes[s - 1].size(); ++h) {
        const double d = (nodes[s][g].center - nodes[s - 1][h].center).norm();
        if (d < best) {
          best = d;
          parent[s][g] = static_cast<int>(h);
        }
      }
      if (std::isfinite(best)) gaps.push_back(best);
    }
  }
  if (!gaps.empty()) {
    std::sort(gaps.begin(), gaps.end());
    const std::size_t m = gaps.size() / 2;
    result.median_spacing =
        gaps.size() % 2 ? gaps[m] : 0.5 * (gaps[m - 1] + gaps[m]);
  } else if (slices.size() >= 2) {
    result.median_spacing =
        std::abs(slices[1].axis_coordinate - slices[0].axis_coordinate);
  }
  result.adjacency_radius = adjacency_multiplier * result.median_spacing;

  std::vector<PartChain> chains;
  std::vector<std::vector<int>> chain_of(slices.size());
  for (std::size_t s = 0; s < slices.size(); ++s) {
    chain_of[s].assign(nodes[s].size(), -1);
    if (s > 0) {
      for (std::size_t h = 0; h < nodes[s - 1].size(); ++h) {
        std::vector<int> children;
        for (std::size_t g = 0; g < nodes[s].size(); ++g) {
          if (parent[s][g] == static_cast<int>(h) &&
              (nodes[s][g].center - nodes[s - 1][h].center).norm() <=
                  result.adjacency_radius) {
            children.push_back(static_cast<int>(g));
          }
        }
        if (children.empty()) continue;
        int heir = -1;
        if (children.size() == 1) {
          heir = children.front();
        } else {
          std::vector<int> by_area = children;
          std::stable_sort(by_area.begin(), by_area.end(), [&](int a, int b) {
            return nodes[s][a].area > nodes[s][b].area;
          });
          const double parent_area = nodes[s - 1][h].area;
          const double first = nodes[s][by_area[0]].area;
          const double second = nodes[s][by_area[1]].area;
          if (first >= 0.5 * parent_area && second < 0.5 * first) {
            heir = by_area[0];
          }
        }
        if (heir >= 0) chain_of[s][heir] = chain_of[s - 1][h];
      }
    }
    for (std::size_t g = 0; g < nodes[s].size(); ++g) {
      if (chain_of[s][g] < 0) {
        chain_of[s][g] = static_cast<int>(chains.size());
        chains.emplace_back();
      }
      chains[chain_of[s][g]].nodes.push_back(nodes[s][g]);
    }
  }
  if (chains.empty()) return result;

  auto max_area = [](const PartChain& c) {
    double a = 0.0;
    for (const ChainNode& n : c.nodes) a = std::max(a, n.area);
    return a;
  };
  const double min_length = 0.25 * result.slice_count;
  bool any_long = false;
  for (const PartChain& c : chains) any_long |= c.nodes.size() > min_length;
  int torso = -1;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    if (any_long && !(chains[i].nodes.size() > min_length)) continue;
    if (torso < 0 || max_area(chains[i]) > max_area(chains[torso])) {
      torso = static_cast<int>(i);
    }
  }
  chains[torso].kind = PartKind::kTorso;
  result.chains.push_back(chains[torso]);
  int limb = 0;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    if (static_cast<int>(i) == torso) continue;
    chains[i].kind = PartKind::kLimb;
    chains[i].index = ++limb;
    result.chains.push_back(chains[i]);
  }
  return result;
}

}  // namespace rigforge
