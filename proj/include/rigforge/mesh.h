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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace rigforge {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Face = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh. Faces keep the winding they were read with.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  /// Optional; either empty or one unit normal per vertex.
  std::vector<Vec3> normals;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_faces() const { return faces.size(); }
};

/// Throws InvalidArgumentError describing the first violated invariant
/// (index range, repeated index in a face, non-finite coordinate).
void check_mesh(const Mesh& mesh);

struct TopologyReport {
  bool is_closed = false;
  std::size_t boundary_edge_count = 0;
  std::size_t non_manifold_edge_count = 0;
  std::size_t connected_component_count = 0;
};

/// Reads the OBJ subset: `v x y z`, `f a b c [d ...]` (1-based or negative
/// relative indices, `a/b/c` corner syntax accepted), `#` comments.
/// Polygons are fan-triangulated. Other directives are skipped and noted in
/// `warnings` when given.
Mesh load_mesh(const std::filesystem::path& path,
               std::vector<std::string>* warnings = nullptr);
Mesh parse_obj(const std::string& text,
               std::vector<std::string>* warnings = nullptr);

void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
std::string format_obj(const Mesh& mesh);

/// Edge-incidence census. An edge used by one face is a boundary edge, by
/// more than two a non-manifold edge. Components count vertices connected
/// through faces; isolated vertices are components of their own.
TopologyReport validate_topology(const Mesh& mesh);

struct CurvinessResult {
  std::vector<double> values;
  /// Vertices whose one-ring is not a single fan; their value is 0.
  std::vector<std::uint32_t> non_manifold_vertices;
};

/// Per-vertex bending: half the sum over incident interior edges of
/// edge length times the angle between the two adjacent face normals
/// (|pi - dihedral|). Zero on flat regions, invariant under rigid motion.
CurvinessResult vertex_curviness(const Mesh& mesh);

/// One third of the area of every incident face.
std::vector<double> vertex_areas(const Mesh& mesh);

double face_area(const Mesh& mesh, std::size_t face);
Vec3 face_normal(const Mesh& mesh, std::size_t face);

/// Largest distance between two corners of the axis-aligned bounding box.
double bounding_diagonal(const Mesh& mesh);

Vec3 vertex_centroid(const Mesh& mesh);

}  // namespace rigforge
