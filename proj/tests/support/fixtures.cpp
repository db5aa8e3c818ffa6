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

#include "fixtures.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace rigforge::fixtures {

namespace {

// Flips faces whose normal points towards `inside`.
void orient_away_from(Mesh& mesh, const Vec3& inside) {
  for (Face& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    const Vec3 n = (b - a).cross(c - a);
    if (n.dot((a + b + c) / 3.0 - inside) < 0.0) std::swap(f[1], f[2]);
  }
}

Face oriented(const Mesh& mesh, Face f, const Vec3& outward) {
  const Vec3& a = mesh.vertices[f[0]];
  const Vec3 n = (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a);
  if (n.dot(outward) < 0.0) std::swap(f[1], f[2]);
  return f;
}

}  // namespace

Mesh cube(double half, const Vec3& center) {
  Mesh m;
  for (int k = 0; k < 8; ++k) {
    m.vertices.push_back(center + half * Vec3(k & 1 ? 1 : -1, k & 2 ? 1 : -1,
                                              k & 4 ? 1 : -1));
  }
  const int quads[6][4] = {{0, 1, 3, 2}, {4, 5, 7, 6}, {0, 1, 5, 4},
                           {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.faces.push_back({std::uint32_t(q[0]), std::uint32_t(q[1]), std::uint32_t(q[2])});
    m.faces.push_back({std::uint32_t(q[0]), std::uint32_t(q[2]), std::uint32_t(q[3])});
  }
  orient_away_from(m, center);
  return m;
}

Mesh two_cubes() {
  Mesh a = cube(0.5, Vec3(-1.0, 0.0, 0.0));
  const Mesh b = cube(0.5, Vec3(1.0, 0.0, 0.0));
  const auto offset = std::uint32_t(a.vertices.size());
  a.vertices.insert(a.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (Face f : b.faces) {
    for (auto& i : f) i += offset;
    a.faces.push_back(f);
  }
  return a;
}

Mesh single_triangle() {
  Mesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  m.faces = {{0, 1, 2}};
  return m;
}

Mesh open_patch(int n) {
  Mesh m;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.emplace_back(double(i) / n, double(j) / n, 0.0);
  auto at = [n](int i, int j) { return std::uint32_t(j * (n + 1) + i); };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      m.faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return m;
}

Mesh uv_sphere(double radius, int rings, int segments) {
  Mesh m;
  m.vertices.emplace_back(-radius, 0.0, 0.0);
  for (int k = 1; k < rings; ++k) {
    const double theta = M_PI * k / rings;
    for (int s = 0; s < segments; ++s) {
      const double phi = 2.0 * M_PI * s / segments;
      m.vertices.emplace_back(-radius * std::cos(theta),
                              radius * std::sin(theta) * std::cos(phi),
                              radius * std::sin(theta) * std::sin(phi));
    }
  }
  m.vertices.emplace_back(radius, 0.0, 0.0);
  const auto last = std::uint32_t(m.vertices.size() - 1);
  auto at = [segments](int ring, int s) {
    return std::uint32_t(1 + (ring - 1) * segments + (s % segments));
  };
  for (int s = 0; s < segments; ++s) {
    m.faces.push_back({0, at(1, s), at(1, s + 1)});
    m.faces.push_back({last, at(rings - 1, s), at(rings - 1, s + 1)});
    for (int k = 1; k + 1 < rings; ++k) {
      m.faces.push_back({at(k, s), at(k + 1, s), at(k + 1, s + 1)});
      m.faces.push_back({at(k, s), at(k + 1, s + 1), at(k, s + 1)});
    }
  }
  orient_away_from(m, Vec3::Zero());
  return m;
}

Mesh sweep_tube(const std::vector<Vec3>& centers,
                const std::vector<Vec3>& normals,
                const std::vector<Vec3>& binormals, double radius,
                int segments) {
  Mesh m;
  const int rings = int(centers.size());
  for (int i = 0; i < rings; ++i) {
    for (int s = 0; s < segments; ++s) {
      const double phi = 2.0 * M_PI * s / segments;
      m.vertices.push_back(centers[i] + radius * (std::cos(phi) * normals[i] +
                                                  std::sin(phi) * binormals[i]));
    }
  }
  auto at = [segments](int i, int s) {
    return std::uint32_t(i * segments + (s % segments));
  };
  for (int i = 0; i + 1 < rings; ++i) {
    const Vec3 axis = 0.5 * (centers[i] + centers[i + 1]);
    for (int s = 0; s < segments; ++s) {
      for (Face f : {Face{at(i, s), at(i + 1, s), at(i + 1, s + 1)},
                     Face{at(i, s), at(i + 1, s + 1), at(i, s + 1)}}) {
        const Vec3 mid = (m.vertices[f[0]] + m.vertices[f[1]] + m.vertices[f[2]]) / 3.0;
        m.faces.push_back(oriented(m, f, mid - axis));
      }
    }
  }
  const Vec3 start_out = centers[0] - centers[1];
  const Vec3 end_out = centers[rings - 1] - centers[rings - 2];
  for (int s = 1; s + 1 < segments; ++s) {
    m.faces.push_back(oriented(m, {at(0, 0), at(0, s), at(0, s + 1)}, start_out));
    m.faces.push_back(
        oriented(m, {at(rings - 1, 0), at(rings - 1, s), at(rings - 1, s + 1)},
                 end_out));
  }
  return m;
}

Mesh cylinder(double length, double radius, int rings, int segments) {
  std::vector<Vec3> centers, normals, binormals;
  for (int i = 0; i < rings; ++i) {
    centers.emplace_back(length * i / (rings - 1), 0.0, 0.0);
    normals.push_back(Vec3::UnitY());
    binormals.push_back(Vec3::UnitZ());
  }
  return sweep_tube(centers, normals, binormals, radius, segments);
}

Mesh bend_along_x(const Mesh& straight, double length, double angle) {
  if (angle == 0.0) return straight;
  Mesh out = straight;
  const double r = length / angle;
  for (Vec3& v : out.vertices) {
    const double phi = v.x() / r;
    const double rho = r - v.y();
    v = Vec3(rho * std::sin(phi), r - rho * std::cos(phi), v.z());
  }
  return out;
}

KneeFixture knee_fixture(double rest_bend) {
  constexpr int kRings = 33;
  constexpr int kSegments = 27;
  constexpr double kThigh = 1.2;
  constexpr double kShin = 0.9;
  constexpr double kFillet = 0.25;

  KneeFixture fx;
  fx.radius = 0.1;
  fx.hip = Vec3::Zero();
  fx.knee = Vec3(kThigh, 0.0, 0.0);
  const Vec3 d2(std::cos(rest_bend), std::sin(rest_bend), 0.0);
  fx.ankle = fx.knee + kShin * d2;

  const double tangent = kFillet * std::tan(0.5 * rest_bend);
  const double straight1 = kThigh - tangent;
  const double arc = kFillet * rest_bend;
  const double total = straight1 + arc + (kShin - tangent);
  const Vec3 arc_center(straight1, kFillet, 0.0);

  std::vector<Vec3> centers, normals, binormals;
  for (int i = 0; i < kRings; ++i) {
    const double s = total * i / (kRings - 1);
    Vec3 c, t;
    if (s <= straight1) {
      c = Vec3(s, 0.0, 0.0);
      t = Vec3::UnitX();
    } else if (s <= straight1 + arc) {
      const double a = (s - straight1) / kFillet;
      c = arc_center + kFillet * Vec3(std::sin(a), -std::cos(a), 0.0);
      t = Vec3(std::cos(a), std::sin(a), 0.0);
    } else {
      c = fx.knee + tangent * d2 + (s - straight1 - arc) * d2;
      t = d2;
    }
    centers.push_back(c);
    normals.push_back(Vec3::UnitZ().cross(t));
    binormals.push_back(Vec3::UnitZ());
  }
  fx.mesh = sweep_tube(centers, normals, binormals, fx.radius, kSegments);
  return fx;
}

double capsule_distance(const Capsule& c, const Vec3& p) {
  const Vec3 ab = c.b - c.a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - c.a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (c.a + t * ab)).norm() - c.radius;
}

double union_distance(const std::vector<Capsule>& parts, const Vec3& p) {
  double d = 1e300;
  for (const Capsule& c : parts) d = std::min(d, capsule_distance(c, p));
  return d;
}

Mesh marching_tetrahedra(const std::function<double(const Vec3&)>& f,
                         const Vec3& lo, const Vec3& hi, double cell) {
  const int nx = int(std::ceil((hi.x() - lo.x()) / cell));
  const int ny = int(std::ceil((hi.y() - lo.y()) / cell));
  const int nz = int(std::ceil((hi.z() - lo.z()) / cell));
  auto index = [&](int i, int j, int k) {
    return std::uint64_t(i) + std::uint64_t(nx + 1) * (std::uint64_t(j) + std::uint64_t(ny + 1) * k);
  };
  auto point = [&](int i, int j, int k) {
    return Vec3(lo.x() + i * cell, lo.y() + j * cell, lo.z() + k * cell);
  };
  const double floor_value = 0.05 * cell;
  std::vector<double> value(std::size_t(nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        double v = f(point(i, j, k));
        if (std::abs(v) < floor_value) v = v < 0.0 ? -floor_value : floor_value;
        value[index(i, j, k)] = v;
      }

  Mesh mesh;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex;
  const std::uint64_t stride = value.size();
  auto grid_point = [&](std::uint64_t g) {
    const int i = int(g % (nx + 1));
    const int j = int((g / (nx + 1)) % (ny + 1));
    const int k = int(g / (std::uint64_t(nx + 1) * (ny + 1)));
    return point(i, j, k);
  };
  auto vertex_on = [&](std::uint64_t a, std::uint64_t b) {
    if (a > b) std::swap(a, b);
    const std::uint64_t key = a * stride + b;
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    const double fa = value[a], fb = value[b];
    const double t = fa / (fa - fb);
    mesh.vertices.push_back(grid_point(a) + t * (grid_point(b) - grid_point(a)));
    const auto id = std::uint32_t(mesh.vertices.size() - 1);
    edge_vertex.emplace(key, id);
    return id;
  };
  auto emit = [&](Face face, const Vec3& outward) {
    mesh.faces.push_back(oriented(mesh, face, outward));
  };

  static const int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        for (const auto& perm : kPerm) {
          std::array<int, 3> c = {0, 0, 0};
          std::array<std::uint64_t, 4> g;
          g[0] = index(i, j, k);
          for (int s = 0; s < 3; ++s) {
            c[perm[s]] = 1;
            g[s + 1] = index(i + c[0], j + c[1], k + c[2]);
          }
          std::vector<std::uint64_t> in, out;
          for (auto x : g) (value[x] < 0.0 ? in : out).push_back(x);
          if (in.empty() || out.empty()) continue;
          Vec3 in_mean = Vec3::Zero(), out_mean = Vec3::Zero();
          for (auto x : in) in_mean += grid_point(x) / double(in.size());
          for (auto x : out) out_mean += grid_point(x) / double(out.size());
          const Vec3 outward = out_mean - in_mean;
          if (in.size() == 1 || out.size() == 1) {
            const auto& lone = in.size() == 1 ? in : out;
            const auto& rest = in.size() == 1 ? out : in;
            emit({vertex_on(lone[0], rest[0]), vertex_on(lone[0], rest[1]),
                  vertex_on(lone[0], rest[2])},
                 outward);
          } else {
            const auto ac = vertex_on(in[0], out[0]);
            const auto ad = vertex_on(in[0], out[1]);
            const auto bd = vertex_on(in[1], out[1]);
            const auto bc = vertex_on(in[1], out[0]);
            emit({ac, ad, bd}, outward);
            emit({ac, bd, bc}, outward);
          }
        }
      }
    }
  }
  return mesh;
}

namespace {

CapsuleFigure figure(std::vector<Capsule> parts, double cell) {
  Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
  for (const Capsule& c : parts) {
    lo = lo.cwiseMin(c.a.cwiseMin(c.b) - Vec3::Constant(c.radius));
    hi = hi.cwiseMax(c.a.cwiseMax(c.b) + Vec3::Constant(c.radius));
  }
  const Vec3 pad = Vec3::Constant(2.0 * cell);
  CapsuleFigure fig;
  fig.parts = std::move(parts);
  fig.cell = cell;
  fig.mesh = marching_tetrahedra(
      [&](const Vec3& p) { return union_distance(fig.parts, p); }, lo - pad,
      hi + pad, cell);
  return fig;
}

}  // namespace

CapsuleFigure humanoid(double cell) {
  std::vector<Capsule> parts = {
      {Vec3(0.0, 0.0, 0.0), Vec3(0.0, 0.55, 0.0), 0.2},      // trunk
      {Vec3(0.0, 0.55, 0.0), Vec3(0.0, 0.8, 0.0), 0.07},     // neck
      {Vec3(0.0, 0.9, 0.0), Vec3(0.0, 0.9, 0.0), 0.14},      // head
      {Vec3(-0.3, 0.55, 0.0), Vec3(0.3, 0.55, 0.0), 0.07},   // shoulders
      {Vec3(-0.3, 0.55, 0.0), Vec3(-0.36, -0.15, 0.0), 0.06},
      {Vec3(0.3, 0.55, 0.0), Vec3(0.36, -0.15, 0.0), 0.06},
      {Vec3(-0.12, -0.05, 0.0), Vec3(-0.12, -0.95, 0.0), 0.09},
      {Vec3(0.12, -0.05, 0.0), Vec3(0.12, -0.95, 0.0), 0.09},
  };
  return figure(std::move(parts), cell);
}

CapsuleFigure y_tube(double cell) {
  std::vector<Capsule> parts = {
      {Vec3(0.0, -0.8, 0.0), Vec3(0.0, 0.1, 0.0), 0.15},
      {Vec3(0.0, 0.1, 0.0), Vec3(-0.45, 0.8, 0.0), 0.12},
      {Vec3(0.0, 0.1, 0.0), Vec3(0.45, 0.8, 0.0), 0.12},
  };
  return figure(std::move(parts), cell);
}

CapsuleFigure torso_with_arms(double cell) {
  std::vector<Capsule> parts = {
      {Vec3(0.0, -0.7, 0.0), Vec3(0.0, 0.7, 0.0), 0.2},
      {Vec3(-0.6, 0.45, 0.0), Vec3(0.6, 0.45, 0.0), 0.07},
  };
  return figure(std::move(parts), cell);
}

Quat random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Quat q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized();
}

Vec3 random_vector(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

Mesh transformed(const Mesh& mesh, const Quat& rotation,
                 const Vec3& translation) {
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v = rotation * v + translation;
  out.normals.clear();
  return out;
}

}  // namespace rigforge::fixtures
