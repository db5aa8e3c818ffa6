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

#include <functional>
#include <random>
#include <vector>

#include "rigforge/linalg.h"
#include "rigforge/mesh.h"

// Synthetic meshes shared by the unit and acceptance tests.
namespace rigforge::fixtures {

Mesh cube(double half = 0.5, const Vec3& center = Vec3::Zero());
Mesh two_cubes();
Mesh single_triangle();
/// Flat n x n grid in the z = 0 plane; not closed.
Mesh open_patch(int n = 4);
/// Closed UV sphere with its poles on the x axis.
Mesh uv_sphere(double radius, int rings, int segments);

/// Closed tube swept along `centers` with one ring per center. The ring
/// at center i spans normals[i] and binormals[i]; the ends are closed by
/// triangle fans over the end rings (no extra vertices).
Mesh sweep_tube(const std::vector<Vec3>& centers,
                const std::vector<Vec3>& normals,
                const std::vector<Vec3>& binormals, double radius,
                int segments);

/// Tube from x = 0 to x = length.
Mesh cylinder(double length, double radius, int rings, int segments);

/// Bends a mesh built along x in [0, length] into a circular arc turning
/// by `angle` in the xy plane; the x = 0 end stays put.
Mesh bend_along_x(const Mesh& straight, double length, double angle);

struct KneeFixture {
  Mesh mesh;
  Vec3 hip, knee, ankle;
  double radius = 0.0;
};

/// 33 rings x 27 segments = 891 vertices: thigh of length 1.2 and shin of
/// 0.9 meeting at a filleted knee bent by `rest_bend` radians.
KneeFixture knee_fixture(double rest_bend = M_PI / 4.0);

struct Capsule {
  Vec3 a, b;
  double radius = 0.0;
};

double capsule_distance(const Capsule& c, const Vec3& p);

/// Signed distance to a union of capsules (negative inside).
double union_distance(const std::vector<Capsule>& parts, const Vec3& p);

/// Isosurface f = 0 by marching tetrahedra over a regular grid with the
/// given cell size; sample values closer than 5% of a cell to zero are
/// pushed off it so every vertex lies strictly inside a grid edge. Faces
/// wind outward (towards f > 0).
Mesh marching_tetrahedra(const std::function<double(const Vec3&)>& f,
                         const Vec3& lo, const Vec3& hi, double cell);

struct CapsuleFigure {
  Mesh mesh;
  std::vector<Capsule> parts;
  double cell = 0.0;

  double distance(const Vec3& p) const { return union_distance(parts, p); }
};

/// Standing figure, y up: trunk, head, two arms hanging beside the trunk,
/// two separated legs.
CapsuleFigure humanoid(double cell = 0.025);
/// Trunk along y forking into two branches.
CapsuleFigure y_tube(double cell = 0.03);
/// Trunk with two arms held out sideways.
CapsuleFigure torso_with_arms(double cell = 0.03);

Quat random_rotation(std::mt19937_64& rng);
Vec3 random_vector(std::mt19937_64& rng, double scale);

/// v -> rotation * v + translation on every vertex.
Mesh transformed(const Mesh& mesh, const Quat& rotation,
                 const Vec3& translation);

}  // namespace rigforge::fixtures
