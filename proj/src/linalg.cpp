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

#include "rigforge/linalg.h"

#include "rigforge/errors.h"

namespace rigforge {

Vec3 rotation_vector(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Vec3 v = q.vec();
  const double s = v.norm();
  if (s == 0.0) return Vec3::Zero();
  const double angle = 2.0 * std::atan2(s, q.w());
  return v / s * angle;
}

Quat quaternion_from_rotation_vector(const Vec3& u) {
  const double angle = u.norm();
  if (angle == 0.0) return Quat::Identity();
  return Quat(Eigen::AngleAxisd(angle, u / angle));
}

Quat shortest_arc(const Vec3& from, const Vec3& to) {
  const Vec3 a = from.normalized();
  const Vec3 b = to.normalized();
  const double c = a.dot(b);
  if (c < -1.0 + 1e-12) {
    // Half turn about any axis orthogonal to `a`; pick the one built from the
    // coordinate axis least aligned with it.
    Eigen::Index k = 0;
    a.cwiseAbs().minCoeff(&k);
    const Vec3 axis = a.cross(Vec3::Unit(k)).normalized();
    return Quat(Eigen::AngleAxisd(M_PI, axis));
  }
  Quat q;
  q.w() = 1.0 + c;
  q.vec() = a.cross(b);
  return q.normalized();
}

namespace {

struct Centroids {
  Vec3 rest = Vec3::Zero();
  Vec3 target = Vec3::Zero();
};

Centroids weighted_centroids(std::span<const Vec3> rest,
                             std::span<const Vec3> target,
                             std::span<const double> weights) {
  Centroids c;
  double total = 0.0;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    c.rest += weights[i] * rest[i];
    c.target += weights[i] * target[i];
    total += weights[i];
  }
  c.rest /= total;
  c.target /= total;
  return c;
}

}  // namespace

RotationFit fit_weighted_rotation(std::span<const Vec3> rest,
                                  std::span<const Vec3> target,
                                  std::span<const double> weights) {
  if (rest.empty() || rest.size() != target.size() ||
      rest.size() != weights.size()) {
    throw InvalidArgumentError("rotation fit needs matching, non-empty inputs");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgumentError("negative fit weight");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgumentError("fit weights sum to zero");

  RotationFit fit;
  const Centroids c = weighted_centroids(rest, target, weights);
  fit.rest_centroid = c.rest;
  fit.target_centroid = c.target;
  if (rest.size() == 1) return fit;

  Mat3 rest_cov = Mat3::Zero();
  Mat3 cross = Mat3::Zero();
  double reference = 0.0;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const Vec3 p = rest[i] - c.rest;
    const Vec3 q = target[i] - c.target;
    rest_cov += weights[i] * p * p.transpose();
    cross += weights[i] * p * q.transpose();
    reference += weights[i] * rest[i].squaredNorm();
  }
  const auto spread = jacobi_eigen<3>(rest_cov);
  if (!(spread.values[0] > 1e-20 * reference)) return fit;
  if (spread.values[1] <= 1e-12 * spread.values[0]) {
    fit.rank = 1;
    const Vec3 line = spread.vectors.col(0);
    Vec3 best = Vec3::Zero();
    double scale = 0.0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const double s = (rest[i] - c.rest).dot(line);
      const Vec3 q = target[i] - c.target;
      best += weights[i] * s * q;
      scale += weights[i] * std::abs(s) * q.norm();
    }
    if (best.norm() > 1e-15 * scale && best.norm() > 0.0) {
      fit.rotation = shortest_arc(line, best);
    }
    return fit;
  }
  fit.rank = spread.values[2] <= 1e-12 * spread.values[0] ? 2 : 3;

  const Mat3& s = cross;
  Eigen::Matrix4d n;
  const double sxx = s(0, 0), sxy = s(0, 1), sxz = s(0, 2);
  const double syx = s(1, 0), syy = s(1, 1), syz = s(1, 2);
  const double szx = s(2, 0), szy = s(2, 1), szz = s(2, 2);
  n << sxx + syy + szz, syz - szy, szx - sxz, sxy - syx,
       syz - szy, sxx - syy - szz, sxy + syx, szx + sxz,
       szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy,
       sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz;
  const auto eig = jacobi_eigen<4>(n);
  const Eigen::Vector4d top = eig.vectors.col(0);
  fit.rotation = Quat(top[0], top[1], top[2], top[3]).normalized();
  if (fit.rotation.w() < 0.0) fit.rotation.coeffs() = -fit.rotation.coeffs();
  return fit;
}

double weighted_alignment_error(std::span<const Vec3> rest,
                                std::span<const Vec3> target,
                                std::span<const double> weights,
                                const Mat3& rotation) {
  const Centroids c = weighted_centroids(rest, target, weights);
  double err = 0.0;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    err += weights[i] *
           (rotation * (rest[i] - c.rest) - (target[i] - c.target)).squaredNorm();
  }
  return err;
}

}  // namespace rigforge
