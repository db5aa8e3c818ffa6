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

#include "rigforge/mesh.h"

namespace rigforge {

/// Body-aligned coordinate system: centroid plus orthonormal axes ordered by
/// descending vertex variance (height, width, thickness for a standing
/// figure).
struct PrincipalFrame {
  Vec3 center = Vec3::Zero();
  /// Columns are the axes; always a proper rotation.
  Mat3 axes = Mat3::Identity();
  /// Half-range of the vertices along each axis.
  Vec3 extents = Vec3::Zero();
  /// Covariance eigenvalues matching the axes.
  Vec3 variances = Vec3::Zero();

  Vec3 to_local(const Vec3& p) const { return axes.transpose() * (p - center); }
  Vec3 to_world(const Vec3& p) const { return axes * p + center; }
};

/// Principal axes of the uniformly weighted vertex cloud. Each axis is signed
/// so that its largest-magnitude coordinate is positive, then the last axis
/// is flipped if needed to make the frame right-handed.
///
/// Throws DegenerateFrameError for fewer than four non-coplanar vertices or
/// when the two largest variances agree within 1e-9 relative.
PrincipalFrame compute_frame(const Mesh& mesh);

/// Vertices re-expressed as axes^T (v - center). Faces are untouched.
Mesh to_frame(const Mesh& mesh, const PrincipalFrame& frame);

/// Inverse of to_frame.
Mesh from_frame(const Mesh& mesh, const PrincipalFrame& frame);

}  // namespace rigforge
