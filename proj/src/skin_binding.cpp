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

#include "rigforge/skin_binding.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rigforge/errors.h"
#include "rigforge/parallel.h"

namespace rigforge {

namespace {

void normalize(std::vector<JointWeight>& ws) {
  double total = 0.0;
  for (const JointWeight& w : ws) total += w.weight;
  for (JointWeight& w : ws) w.weight /= total;
}

}  // namespace

SkinBinding bind_vertices(const Mesh& mesh, const Skeleton& skeleton) {
  if (skeleton.bones.empty()) throw SkeletonError("skeleton has no bones");
  const std::size_t n = mesh.vertices.size();
  SkinBinding binding;
  binding.bone_of_vertex.resize(n);
  binding.bone_distance.resize(n);
  binding.bone_param.resize(n);
  parallel_for(n, [&](std::size_t v) {
    const Vec3& p = mesh.vertices[v];
    double best = INFINITY;
    for (std::uint32_t b = 0; b < skeleton.bones.size(); ++b) {
      const Vec3& a = skeleton.joints[skeleton.bones[b][0]];
      const Vec3 seg = skeleton.joints[skeleton.bones[b][1]] - a;
      const double len2 = seg.squaredNorm();
      const double t =
          len2 > 0.0 ? std::clamp((p - a).dot(seg) / len2, 0.0, 1.0) : 0.0;
      const double d = (p - (a + t * seg)).norm();
      if (d < best) {
        best = d;
        binding.bone_of_vertex[v] = b;
        binding.bone_distance[v] = d;
        binding.bone_param[v] = t;
      }
    }
  });
  return binding;
}

SkinBinding compute_weights(const Mesh& mesh, const Skeleton& skeleton,
                            SkinBinding binding, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgumentError("alpha must be positive");
  if (binding.influence_radius_joints < 1) {
    throw InvalidArgumentError("influence_radius_joints must be >= 1");
  }
  const std::size_t n = mesh.vertices.size();
  const std::size_t joints = skeleton.joints.size();
  if (binding.bone_of_vertex.size() != n) {
    throw InvalidArgumentError("binding does not match mesh vertex count");
  }
  const auto table = path_distance_table(skeleton);
  const auto keep = std::min<std::size_t>(binding.influence_radius_joints, joints);
  binding.weights.assign(n, {});
  parallel_for(n, [&](std::size_t v) {
    const Bone& bone = skeleton.bones[binding.bone_of_vertex[v]];
    const double t = binding.bone_param[v];
    const double len = (skeleton.joints[bone[1]] - skeleton.joints[bone[0]]).norm();
    const double hop = binding.bone_distance[v];
    std::vector<std::pair<double, std::uint32_t>> dist(joints);
    for (std::uint32_t j = 0; j < joints; ++j) {
      const double via0 = t * len + table[bone[0] * joints + j];
      const double via1 = (1.0 - t) * len + table[bone[1] * joints + j];
      dist[j] = {hop + std::min(via0, via1), j};
    }
    std::partial_sort(dist.begin(), dist.begin() + keep, dist.end());
    std::vector<JointWeight> ws;
    ws.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) {
      ws.push_back({dist[k].second,
                    1.0 / (std::pow(dist[k].first, alpha) + kWeightEpsilon)});
    }
    normalize(ws);
    std::sort(ws.begin(), ws.end(),
              [](const JointWeight& a, const JointWeight& b) {
                return a.joint < b.joint;
              });
    binding.weights[v] = std::move(ws);
  });
  return binding;
}

SkinBinding rigidity_profile(const SkinBinding& binding,
                             const std::set<std::uint32_t>& stiff_bones,
                             double stiffness, std::size_t bone_count) {
  if (!(stiffness >= 1.0)) throw InvalidArgumentError("stiffness must be >= 1");
  for (auto b : stiff_bones) {
    if (b >= bone_count) {
      throw InvalidArgumentError("unknown bone index " + std::to_string(b));
    }
  }
  SkinBinding out = binding;
  if (stiffness == 1.0) return out;
  for (std::size_t v = 0; v < out.weights.size(); ++v) {
    if (!stiff_bones.contains(out.bone_of_vertex[v])) continue;
    for (JointWeight& w : out.weights[v]) w.weight = std::pow(w.weight, stiffness);
    normalize(out.weights[v]);
  }
  return out;
}

void check_binding(const SkinBinding& binding, std::size_t vertex_count,
                   std::size_t joint_count, double tolerance) {
  if (binding.weights.size() != vertex_count ||
      binding.bone_of_vertex.size() != vertex_count) {
    throw InvalidArgumentError("binding covers " +
                               std::to_string(binding.weights.size()) +
                               " vertices, mesh has " +
                               std::to_string(vertex_count));
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    const auto& ws = binding.weights[v];
    if (ws.empty()) {
      throw InvalidArgumentError("vertex " + std::to_string(v) +
                                 " has no influences");
    }
    double total = 0.0;
    for (const JointWeight& w : ws) {
      if (w.joint >= joint_count || !(w.weight >= 0.0)) {
        throw InvalidArgumentError("vertex " + std::to_string(v) +
                                   " has an invalid influence");
      }
      total += w.weight;
    }
    if (std::abs(total - 1.0) > tolerance) {
      throw InvalidArgumentError("weights of vertex " + std::to_string(v) +
                                 " sum to " + std::to_string(total));
    }
  }
}

}  // namespace rigforge
