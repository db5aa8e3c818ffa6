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

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "rigforge/mesh.h"

namespace rigforge {

using Quat = Eigen::Quaterniond;

template <int N>
struct SymmetricEigen {
  /// Descending.
  Eigen::Matrix<double, N, 1> values;
  /// Column k is the unit eigenvector of values[k].
  Eigen::Matrix<double, N, N> vectors;
};

/// Cyclic Jacobi eigensolver for small symmetric matrices. Iterates until
/// every off-diagonal entry is below 1e-12 of the Frobenius norm, then runs
/// one polishing sweep. Equal eigenvalues keep their input-axis order.
template <int N>
SymmetricEigen<N> jacobi_eigen(const Eigen::Matrix<double, N, N>& input) {
  using MatN = Eigen::Matrix<double, N, N>;
  MatN a = 0.5 * (input + input.transpose());
  MatN v = MatN::Identity();
  const double norm = a.norm();

  auto max_off = [&] {
    double m = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) m = std::max(m, std::abs(a(p, q)));
    return m;
  };

  auto sweep = [&] {
    for (int p = 0; p < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < N; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < N; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  };

  if (norm > 0.0) {
    for (int iter = 0; iter < 64 && max_off() > 1e-12 * norm; ++iter) sweep();
    sweep();
  }

  std::array<int, N> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a(x, x) > a(y, y); });
  SymmetricEigen<N> out;
  for (int k = 0; k < N; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]).normalized();
  }
  return out;
}

/// Axis times angle, angle in [0, pi].
Vec3 rotation_vector(const Quat& q);
Quat quaternion_from_rotation_vector(const Vec3& u);
/// Smallest-angle rotation taking direction `from` onto `to`.
Quat shortest_arc(const Vec3& from, const Vec3& to);

struct RotationFit {
  Quat rotation = Quat::Identity();
  Vec3 rest_centroid = Vec3::Zero();
  Vec3 target_centroid = Vec3::Zero();
  /// Rank of the weighted, centered rest configuration. Below 2 the
  /// rotation comes from the minimal-motion fallback.
  int rank = 0;
};

/// Rotation R maximizing sum_i w_i <R (p_i - p*), q_i - q*> with det R = +1,
/// found as the top eigenvector of the 4x4 quaternion form of the weighted
/// cross-covariance. Rank 0 yields identity; rank 1 (collinear rest points)
/// yields the smallest rotation taking the rest line onto its best target
/// direction.
RotationFit fit_weighted_rotation(std::span<const Vec3> rest,
                                  std::span<const Vec3> target,
                                  std::span<const double> weights);

/// sum_i w_i |R (p_i - p*) - (q_i - q*)|^2 with weighted centroids.
double weighted_alignment_error(std::span<const Vec3> rest,
                                std::span<const Vec3> target,
                                std::span<const double> weights,
                                const Mat3& rotation);

}  // namespace rigforge
