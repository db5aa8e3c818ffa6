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

#include "rigforge/skeleton.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rigforge/errors.h"

namespace rigforge {

void Skeleton::recompute_lengths() {
  bone_lengths.resize(bones.size());
  for (std::size_t b = 0; b < bones.size(); ++b) {
    bone_lengths[b] = (joints[bones[b][0]] - joints[bones[b][1]]).norm();
  }
}

namespace {

std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency(
    const Skeleton& s) {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(
      s.joints.size());
  for (std::size_t b = 0; b < s.bones.size(); ++b) {
    const double len = b < s.bone_lengths.size()
                           ? s.bone_lengths[b]
                           : (s.joints[s.bones[b][0]] - s.joints[s.bones[b][1]])
                                 .norm();
    adj[s.bones[b][0]].emplace_back(s.bones[b][1], len);
    adj[s.bones[b][1]].emplace_back(s.bones[b][0], len);
  }
  return adj;
}

std::vector<double> distances_from(
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>& adj,
    std::uint32_t source) {
  std::vector<double> dist(adj.size(), std::numeric_limits<double>::infinity());
  std::vector<std::uint32_t> stack{source};
  dist[source] = 0.0;
  while (!stack.empty()) {
    const std::uint32_t j = stack.back();
    stack.pop_back();
    for (auto [k, len] : adj[j]) {
      if (std::isinf(dist[k])) {
        dist[k] = dist[j] + len;
        stack.push_back(k);
      }
    }
  }
  return dist;
}

double bend_degrees(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 in = b - a;
  const Vec3 out = c - b;
  if (in.norm() == 0.0 || out.norm() == 0.0) return 0.0;
  return std::atan2(in.cross(out).norm(), in.dot(out)) * 180.0 / M_PI;
}

struct BezierSegment {
  Vec3 b0, b1, b2, b3;
  Vec3 at(double t) const {
    const double s = 1.0 - t;
    return s * s * s * b0 + 3.0 * s * s * t * b1 + 3.0 * s * t * t * b2 +
           t * t * t * b3;
  }
};

}  // namespace

void check_skeleton(const Skeleton& s) {
  const std::size_t n = s.joints.size();
  if (n == 0) throw SkeletonError("skeleton has no joints");
  if (s.bones.size() + 1 != n) {
    throw SkeletonError("skeleton is not a tree: " + std::to_string(n) +
                        " joints, " + std::to_string(s.bones.size()) + " bones");
  }
  if (s.root >= n) throw SkeletonError("root index out of range");
  if (s.bone_lengths.size() != s.bones.size()) {
    throw SkeletonError("bone length count does not match bone count");
  }
  for (std::size_t b = 0; b < s.bones.size(); ++b) {
    const Bone& bone = s.bones[b];
    if (bone[0] >= n || bone[1] >= n || bone[0] == bone[1]) {
      throw SkeletonError("bone " + std::to_string(b) + " has bad endpoints");
    }
    const double len = (s.joints[bone[0]] - s.joints[bone[1]]).norm();
    if (std::abs(len - s.bone_lengths[b]) > 1e-9 * std::max(1.0, len)) {
      throw SkeletonError("bone " + std::to_string(b) + " length is stale");
    }
  }
  const auto dist = distances_from(adjacency(s), s.root);
  for (double d : dist) {
    if (std::isinf(d)) throw SkeletonError("skeleton is disconnected");
  }
}

std::vector<std::size_t> decimate_chain_indices(std::span<const Vec3> centers,
                                                double angle_tolerance_deg,
                                                std::span<const char> keep) {
  std::vector<std::size_t> out;
  const std::size_t n = centers.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool end = i == 0 || i + 1 == n;
    const bool forced = !keep.empty() && keep[i];
    if (end || forced ||
        bend_degrees(centers[i - 1], centers[i], centers[i + 1]) >
            angle_tolerance_deg) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<Vec3> decimate_chain(std::span<const Vec3> centers,
                                 double angle_tolerance_deg) {
  std::vector<Vec3> out;
  for (std::size_t i : decimate_chain_indices(centers, angle_tolerance_deg)) {
    out.push_back(centers[i]);
  }
  return out;
}

std::vector<Vec3> smooth_centers(std::span<const Vec3> centers) {
  const std::size_t n = centers.size();
  std::vector<Vec3> out(centers.begin(), centers.end());
  if (n < 4) return out;

  std::vector<Vec3> tangent(n);
  tangent[0] = centers[1] - centers[0];
  tangent[n - 1] = centers[n - 1] - centers[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    tangent[i] = 0.5 * (centers[i + 1] - centers[i - 1]);
  }
  std::vector<BezierSegment> segs(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    segs[i] = {centers[i], centers[i] + tangent[i] / 3.0,
               centers[i + 1] - tangent[i + 1] / 3.0, centers[i + 1]};
  }

  // Cumulative arc length over a dense parameter sampling.
  constexpr int kSamples = 64;
  std::vector<double> arc{0.0};
  std::vector<double> param{0.0};
  Vec3 prev = centers[0];
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (int k = 1; k <= kSamples; ++k) {
      const double t = double(k) / kSamples;
      const Vec3 p = segs[i].at(t);
      arc.push_back(arc.back() + (p - prev).norm());
      param.push_back(double(i) + t);
      prev = p;
    }
  }
  const double total = arc.back();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double s = total * double(k) / double(n - 1);
    const auto it = std::lower_bound(arc.begin(), arc.end(), s);
    const std::size_t hi = std::clamp<std::size_t>(it - arc.begin(), 1, arc.size() - 1);
    const double span = arc[hi] - arc[hi - 1];
    const double f = span > 0.0 ? (s - arc[hi - 1]) / span : 0.0;
    const double u = param[hi - 1] + f * (param[hi] - param[hi - 1]);
    const std::size_t seg = std::min<std::size_t>(std::size_t(u), segs.size() - 1);
    out[k] = segs[seg].at(u - double(seg));
  }
  return out;
}

Skeleton build_skeleton(const PartChains& chains, const Mesh& aligned_mesh,
                        const SkeletonOptions& options) {
  return build_skeleton(chains, aligned_mesh, RayCaster(aligned_mesh), options);
}

Skeleton build_skeleton(const PartChains& chains, const Mesh& aligned_mesh,
                        const RayCaster& caster,
                        const SkeletonOptions& options) {
  if (chains.chains.empty()) throw SkeletonError("no part chains to build from");

  auto centers_of = [&](const PartChain& chain) {
    std::vector<Vec3> c;
    for (const ChainNode& node : chain.nodes) c.push_back(node.center);
    if (options.smooth) c = smooth_centers(c);
    return c;
  };

  const PartChain& torso = chains.chains.front();
  const std::vector<Vec3> trunk = centers_of(torso);
  std::vector<char> keep(trunk.size(), 0);

  struct LimbPlan {
    std::vector<Vec3> centers;  // attached end first
    std::size_t trunk_index;
    int chain;
  };
  std::vector<LimbPlan> limbs;
  const double max_gap = options.attach_multiplier * chains.median_spacing;
  for (std::size_t c = 1; c < chains.chains.size(); ++c) {
    std::vector<Vec3> centers = centers_of(chains.chains[c]);
    std::size_t best_trunk = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    bool from_tail = false;
    for (int end = 0; end < 2; ++end) {
      const Vec3& tip = end == 0 ? centers.front() : centers.back();
      for (std::size_t i = 0; i < trunk.size(); ++i) {
        const double gap = (tip - trunk[i]).norm() - torso.nodes[i].radius;
        if (gap < best_gap) {
          best_gap = gap;
          best_trunk = i;
          from_tail = end == 1;
        }
      }
    }
    if (best_gap > max_gap) {
      throw SkeletonError(chains.chains[c].label() +
                          " is disconnected from the torso (gap " +
                          std::to_string(best_gap) + " > " +
                          std::to_string(max_gap) + ")");
    }
    if (from_tail) std::reverse(centers.begin(), centers.end());
    keep[best_trunk] = 1;
    limbs.push_back({std::move(centers), best_trunk, static_cast<int>(c)});
  }

  Skeleton skel;
  std::vector<std::uint32_t> trunk_joint(trunk.size(), 0);
  const auto trunk_kept =
      decimate_chain_indices(trunk, options.angle_tolerance_deg, keep);
  for (std::size_t i = 0; i < trunk_kept.size(); ++i) {
    const std::size_t src = trunk_kept[i];
    trunk_joint[src] = static_cast<std::uint32_t>(skel.joints.size());
    skel.joints.push_back(trunk[src]);
    skel.joint_chain.push_back(0);
    if (i > 0) skel.bones.push_back({trunk_joint[trunk_kept[i - 1]], trunk_joint[src]});
  }
  for (const LimbPlan& limb : limbs) {
    std::uint32_t prev = trunk_joint[limb.trunk_index];
    for (std::size_t src :
         decimate_chain_indices(limb.centers, options.angle_tolerance_deg)) {
      const auto j = static_cast<std::uint32_t>(skel.joints.size());
      skel.joints.push_back(limb.centers[src]);
      skel.joint_chain.push_back(limb.chain);
      skel.bones.push_back({prev, j});
      prev = j;
    }
  }
  if (skel.bones.empty()) {
    throw SkeletonError("skeleton needs at least two joints; too few slices "
                        "intersected the mesh");
  }

  const Vec3 centroid = vertex_centroid(aligned_mesh);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trunk_kept.size(); ++i) {
    const double d = (skel.joints[i] - centroid).norm();
    if (d < best) {
      best = d;
      skel.root = static_cast<std::uint32_t>(i);
    }
  }
  skel.recompute_lengths();

  for (std::size_t j = 0; j < skel.joints.size(); ++j) {
    if (!caster.is_interior(skel.joints[j])) {
      throw SkeletonError("joint " + std::to_string(j) +
                          " lies outside the mesh");
    }
  }
  check_skeleton(skel);
  return skel;
}

Skeleton skeleton_to_world(const Skeleton& local, const PrincipalFrame& frame) {
  Skeleton out = local;
  for (Vec3& j : out.joints) j = frame.to_world(j);
  out.recompute_lengths();
  return out;
}

double skeleton_path_distance(const Skeleton& skeleton, std::uint32_t a,
                              std::uint32_t b) {
  const std::size_t n = skeleton.joints.size();
  if (a >= n || b >= n) {
    throw InvalidArgumentError("joint index out of range");
  }
  if (a == b) return 0.0;
  return distances_from(adjacency(skeleton), a)[b];
}

std::vector<double> path_distance_table(const Skeleton& skeleton) {
  const std::size_t n = skeleton.joints.size();
  const auto adj = adjacency(skeleton);
  std::vector<double> table(n * n);
  for (std::uint32_t j = 0; j < n; ++j) {
    const auto d = distances_from(adj, j);
    std::copy(d.begin(), d.end(), table.begin() + j * n);
  }
  return table;
}

}  // namespace rigforge
