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

#include "rigforge/principal_frame.h"

#include <cmath>

#include "rigforge/errors.h"
#include "rigforge/linalg.h"

namespace rigforge {

PrincipalFrame compute_frame(const Mesh& mesh) {
  if (mesh.vertices.size() < 4) {
    throw DegenerateFrameError("need at least 4 vertices for a principal frame");
  }
  PrincipalFrame frame;
  frame.center = vertex_centroid(mesh);
  Mat3 cov = Mat3::Zero();
  for (const Vec3& v : mesh.vertices) {
    const Vec3 d = v - frame.center;
    cov += d * d.transpose();
  }
  cov /= double(mesh.vertices.size());

  const auto eig = jacobi_eigen<3>(cov);
  const double top = eig.values[0];
  if (!(top > 0.0) || eig.values[2] <= 1e-12 * top) {
    throw DegenerateFrameError("vertices are coplanar or coincident");
  }
  if (top - eig.values[1] <= 1e-9 * top) {
    throw DegenerateFrameError(
        "two largest variances are equal; major axis is ambiguous");
  }

  for (int k = 0; k < 3; ++k) {
    Vec3 axis = eig.vectors.col(k);
    Eigen::Index big = 0;
    axis.cwiseAbs().maxCoeff(&big);
    if (axis[big] < 0.0) axis = -axis;
    frame.axes.col(k) = axis;
  }
  if (frame.axes.determinant() < 0.0) frame.axes.col(2) = -frame.axes.col(2);
  frame.variances = eig.values;

  Vec3 lo = Vec3::Constant(INFINITY);
  Vec3 hi = Vec3::Constant(-INFINITY);
  for (const Vec3& v : mesh.vertices) {
    const Vec3 local = frame.to_local(v);
    lo = lo.cwiseMin(local);
    hi = hi.cwiseMax(local);
  }
  frame.extents = 0.5 * (hi - lo);
  return frame;
}

Mesh to_frame(const Mesh& mesh, const PrincipalFrame& frame) {
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v = frame.to_local(v);
  for (Vec3& n : out.normals) n = frame.axes.transpose() * n;
  return out;
}

Mesh from_frame(const Mesh& mesh, const PrincipalFrame& frame) {
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v = frame.to_world(v);
  for (Vec3& n : out.normals) n = frame.axes * n;
  return out;
}

}  // namespace rigforge
