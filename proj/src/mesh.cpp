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

#include "rigforge/mesh.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "rigforge/errors.h"
#include "rigforge/parallel.h"

namespace rigforge {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view tok, std::size_t line) {
  double value = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    parse_fail(line, "bad coordinate '" + std::string(tok) + "'");
  }
  return value;
}

std::uint32_t parse_index(std::string_view tok, std::size_t vertex_count,
                          std::size_t line) {
  tok = tok.substr(0, tok.find('/'));
  long long idx = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, idx);
  if (ec != std::errc() || ptr != end) {
    parse_fail(line, "bad face index '" + std::string(tok) + "'");
  }
  long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(vertex_count) + idx;
  if (idx == 0 || resolved < 0 ||
      resolved >= static_cast<long long>(vertex_count)) {
    parse_fail(line, "face index " + std::to_string(idx) + " out of range");
  }
  return static_cast<std::uint32_t>(resolved);
}

struct EdgeUse {
  std::uint64_t key;
  std::uint32_t face;
  bool forward;  // edge stored as (min, max) matches face winding
};

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Sorted list of (edge, face) incidences; equal keys are adjacent.
std::vector<EdgeUse> edge_uses(const Mesh& mesh) {
  std::vector<EdgeUse> uses;
  uses.reserve(mesh.faces.size() * 3);
  for (std::uint32_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = t[k];
      const std::uint32_t b = t[(k + 1) % 3];
      uses.push_back({edge_key(a, b), f, a < b});
    }
  }
  std::sort(uses.begin(), uses.end(), [](const EdgeUse& x, const EdgeUse& y) {
    return x.key != y.key ? x.key < y.key : x.face < y.face;
  });
  return uses;
}

struct DisjointSets {
  std::vector<std::uint32_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

void check_mesh(const Mesh& mesh) {
  const std::size_t n = mesh.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!mesh.vertices[i].allFinite()) {
      throw InvalidArgumentError("vertex " + std::to_string(i) +
                                 " has a non-finite coordinate");
    }
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& t = mesh.faces[f];
    for (auto idx : t) {
      if (idx >= n) {
        throw InvalidArgumentError("face " + std::to_string(f) +
                                   " references vertex " + std::to_string(idx));
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw InvalidArgumentError("face " + std::to_string(f) +
                                 " repeats a vertex index");
    }
  }
  if (!mesh.normals.empty() && mesh.normals.size() != n) {
    throw InvalidArgumentError("normal count does not match vertex count");
  }
}

Mesh parse_obj(const std::string& text, std::vector<std::string>* warnings) {
  Mesh mesh;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> skipped;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto tokens = split_ws(line);
    const std::string_view tag = tokens.front();
    if (tag == "v") {
      if (tokens.size() < 4 || tokens.size() > 5) {
        parse_fail(line_no, "vertex needs 3 coordinates");
      }
      mesh.vertices.emplace_back(parse_double(tokens[1], line_no),
                                 parse_double(tokens[2], line_no),
                                 parse_double(tokens[3], line_no));
    } else if (tag == "f") {
      if (tokens.size() < 4) parse_fail(line_no, "face needs 3 indices");
      std::vector<std::uint32_t> poly;
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        poly.push_back(parse_index(tokens[k], mesh.vertices.size(), line_no));
      }
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        Face f{poly[0], poly[k], poly[k + 1]};
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
          parse_fail(line_no, "face repeats a vertex index");
        }
        mesh.faces.push_back(f);
      }
    } else {
      if (std::find(skipped.begin(), skipped.end(), tag) == skipped.end()) {
        skipped.emplace_back(tag);
        if (warnings) {
          warnings->push_back("line " + std::to_string(line_no) +
                              ": skipped unsupported directive '" +
                              std::string(tag) + "'");
        }
      }
    }
  }
  if (mesh.vertices.empty()) throw EmptyMeshError("mesh has no vertices");
  return mesh;
}

Mesh load_mesh(const std::filesystem::path& path,
               std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_obj(buf.str(), warnings);
}

std::string format_obj(const Mesh& mesh) {
  std::string out;
  out.reserve(mesh.vertices.size() * 48 + mesh.faces.size() * 24);
  char num[64];
  for (const Vec3& v : mesh.vertices) {
    out += 'v';
    for (int k = 0; k < 3; ++k) {
      auto [ptr, ec] = std::to_chars(num, num + sizeof(num), v[k]);
      out += ' ';
      out.append(num, ptr);
    }
    out += '\n';
  }
  for (const Face& f : mesh.faces) {
    out += 'f';
    for (auto idx : f) {
      out += ' ';
      out += std::to_string(idx + 1);
    }
    out += '\n';
  }
  return out;
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  check_mesh(mesh);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_obj(mesh);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

TopologyReport validate_topology(const Mesh& mesh) {
  TopologyReport report;
  const auto uses = edge_uses(mesh);
  for (std::size_t i = 0; i < uses.size();) {
    std::size_t j = i;
    while (j < uses.size() && uses[j].key == uses[i].key) ++j;
    const std::size_t count = j - i;
    if (count == 1) ++report.boundary_edge_count;
    if (count > 2) ++report.non_manifold_edge_count;
    i = j;
  }
  report.is_closed =
      report.boundary_edge_count == 0 && report.non_manifold_edge_count == 0;

  DisjointSets sets(mesh.vertices.size());
  for (const Face& f : mesh.faces) {
    sets.unite(f[0], f[1]);
    sets.unite(f[1], f[2]);
  }
  for (std::uint32_t v = 0; v < mesh.vertices.size(); ++v) {
    if (sets.find(v) == v) ++report.connected_component_count;
  }
  return report;
}

Vec3 face_normal(const Mesh& mesh, std::size_t face) {
  const Face& f = mesh.faces[face];
  const Vec3& a = mesh.vertices[f[0]];
  const Vec3& b = mesh.vertices[f[1]];
  const Vec3& c = mesh.vertices[f[2]];
  const Vec3 n = (b - a).cross(c - a);
  const double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

double face_area(const Mesh& mesh, std::size_t face) {
  const Face& f = mesh.faces[face];
  const Vec3& a = mesh.vertices[f[0]];
  return 0.5 * (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a).norm();
}

std::vector<double> vertex_areas(const Mesh& mesh) {
  std::vector<double> areas(mesh.vertices.size(), 0.0);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const double third = face_area(mesh, f) / 3.0;
    for (auto idx : mesh.faces[f]) areas[idx] += third;
  }
  return areas;
}

CurvinessResult vertex_curviness(const Mesh& mesh) {
  const std::size_t n = mesh.vertices.size();
  CurvinessResult result;
  result.values.assign(n, 0.0);

  // Vertex one-rings; a vertex is manifold when its link (the edges
  // opposite to it in incident faces) is one connected path or cycle.
  std::vector<std::vector<std::uint32_t>> incident(n);
  for (std::uint32_t f = 0; f < mesh.faces.size(); ++f) {
    for (auto idx : mesh.faces[f]) incident[idx].push_back(f);
  }
  std::vector<char> manifold(n, 1);
  parallel_for(n, [&](std::size_t v) {
    const auto& ring = incident[v];
    if (ring.empty()) return;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> link;
    link.reserve(ring.size());
    for (auto f : ring) {
      const Face& t = mesh.faces[f];
      std::uint32_t others[2];
      int k = 0;
      for (auto idx : t) {
        if (idx != v) others[k++] = idx;
      }
      link.emplace_back(others[0], others[1]);
    }
    std::vector<std::uint32_t> nodes;
    for (auto [a, b] : link) {
      nodes.push_back(a);
      nodes.push_back(b);
    }
    std::sort(nodes.begin(), nodes.end());
    // Degree of each link node is its multiplicity in `nodes`.
    for (std::size_t i = 0; i < nodes.size();) {
      std::size_t j = i;
      while (j < nodes.size() && nodes[j] == nodes[i]) ++j;
      if (j - i > 2) {
        manifold[v] = 0;
        return;
      }
      i = j;
    }
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    auto local = [&](std::uint32_t x) {
      return static_cast<std::uint32_t>(
          std::lower_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
    };
    DisjointSets sets(nodes.size());
    for (auto [a, b] : link) sets.unite(local(a), local(b));
    for (std::uint32_t i = 1; i < nodes.size(); ++i) {
      if (sets.find(i) != sets.find(0)) {
        manifold[v] = 0;
        return;
      }
    }
  });

  std::vector<Vec3> normals(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    normals[f] = face_normal(mesh, f);
  }

  const auto uses = edge_uses(mesh);
  for (std::size_t i = 0; i < uses.size();) {
    std::size_t j = i;
    while (j < uses.size() && uses[j].key == uses[i].key) ++j;
    if (j - i == 2) {
      const EdgeUse& e0 = uses[i];
      const EdgeUse& e1 = uses[i + 1];
      Vec3 n0 = normals[e0.face];
      Vec3 n1 = normals[e1.face];
      // Consistently wound neighbours traverse the edge in opposite
      // directions; otherwise one normal is flipped.
      if (e0.forward == e1.forward) n1 = -n1;
      const double angle = std::atan2(n0.cross(n1).norm(), n0.dot(n1));
      const auto a = static_cast<std::uint32_t>(e0.key >> 32);
      const auto b = static_cast<std::uint32_t>(e0.key & 0xffffffffu);
      const double half =
          0.5 * (mesh.vertices[a] - mesh.vertices[b]).norm() * angle;
      result.values[a] += half;
      result.values[b] += half;
    }
    i = j;
  }

  for (std::uint32_t v = 0; v < n; ++v) {
    if (!manifold[v]) {
      result.values[v] = 0.0;
      result.non_manifold_vertices.push_back(v);
    }
  }
  return result;
}

double bounding_diagonal(const Mesh& mesh) {
  if (mesh.vertices.empty()) return 0.0;
  Vec3 lo = mesh.vertices.front();
  Vec3 hi = lo;
  for (const Vec3& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

Vec3 vertex_centroid(const Mesh& mesh) {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& v : mesh.vertices) sum += v;
  return mesh.vertices.empty() ? sum : Vec3(sum / double(mesh.vertices.size()));
}

}  // namespace rigforge
