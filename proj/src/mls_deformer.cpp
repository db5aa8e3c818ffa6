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

#include "rigforge/mls_deformer.h"

#include <cmath>
#include <set>
#include <string>

#include "rigforge/errors.h"
#include "rigforge/parallel.h"

namespace rigforge {

void check_handles(const ControlHandles& handles, std::size_t joint_count) {
  if (handles.handles.empty()) throw InvalidPoseError("no control handles");
  std::set<std::uint32_t> seen;
  for (const Handle& h : handles.handles) {
    if (h.joint >= joint_count) {
      throw InvalidPoseError("handle references joint " +
                             std::to_string(h.joint) + " but the rig has " +
                             std::to_string(joint_count) + " joints");
    }
    if (!seen.insert(h.joint).second) {
      throw InvalidPoseError("joint " + std::to_string(h.joint) +
                             " has more than one handle");
    }
    if (!h.target.allFinite()) {
      throw InvalidPoseError("handle target for joint " +
                             std::to_string(h.joint) + " is not finite");
    }
  }
}

ControlHandles rest_handles(const Skeleton& skeleton,
                            const std::vector<std::uint32_t>& joints) {
  ControlHandles out;
  for (auto j : joints) out.handles.push_back({j, skeleton.joints.at(j)});
  return out;
}

DeformationCache solve_joint_transforms(const Skeleton& skeleton,
                                        const ControlHandles& handles,
                                        double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgumentError("alpha must be positive");
  const std::size_t n = skeleton.joints.size();
  check_handles(handles, n);
  const auto table = path_distance_table(skeleton);
  const std::size_t m = handles.handles.size();
  std::vector<Vec3> rest(m);
  std::vector<Vec3> target(m);
  for (std::size_t i = 0; i < m; ++i) {
    rest[i] = skeleton.joints[handles.handles[i].joint];
    target[i] = handles.handles[i].target;
  }

  DeformationCache cache;
  cache.joints.resize(n);
  cache.deformed_joints.resize(n);
  std::vector<double> weights(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const double d = table[j * n + handles.handles[i].joint];
      weights[i] = 1.0 / (std::pow(d, 2.0 * alpha) + kMlsEpsilon);
    }
    const RotationFit fit = fit_weighted_rotation(rest, target, weights);
    JointTransform& t = cache.joints[j];
    t.p_star = fit.rest_centroid;
    t.q_star = fit.target_centroid;
    t.rotation = fit.rotation;
    t.u = rotation_vector(fit.rotation);
    t.translation = t.q_star - t.rotation * t.p_star;
    t.rank = fit.rank;
    cache.degenerate |= fit.rank < 2;
    cache.deformed_joints[j] = t.apply(skeleton.joints[j]);
  }
  return cache;
}

Mesh blend_vertices(const Mesh& mesh, const SkinBinding& binding,
                    const DeformationCache& cache) {
  if (binding.weights.size() != mesh.vertices.size()) {
    throw InvalidArgumentError("binding does not match mesh vertex count");
  }
  std::vector<Mat3> rotations(cache.joints.size());
  for (std::size_t j = 0; j < cache.joints.size(); ++j) {
    rotations[j] = cache.joints[j].rotation.toRotationMatrix();
  }
  Mesh out = mesh;
  parallel_for(mesh.vertices.size(), [&](std::size_t v) {
    const Vec3& x = mesh.vertices[v];
    Vec3 sum = Vec3::Zero();
    for (const JointWeight& w : binding.weights[v]) {
      if (w.joint >= cache.joints.size()) {
        throw InvalidArgumentError("binding references joint " +
                                   std::to_string(w.joint) +
                                   " missing from the cache");
      }
      const JointTransform& t = cache.joints[w.joint];
      sum += w.weight * (rotations[w.joint] * (x - t.p_star) + t.q_star);
    }
    out.vertices[v] = sum;
  });
  if (!out.normals.empty()) out.normals.clear();
  return out;
}

}  // namespace rigforge
