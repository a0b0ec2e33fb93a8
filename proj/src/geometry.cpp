// SPDX-License-Identifier: Apache-2.0
//
// orient3d: absolute 3D orientation from mmWave angle-of-arrival measurements
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "orient3d/geometry.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "orient3d/error.hpp"
#include "orient3d/random.hpp"

namespace orient3d {

namespace {

constexpr double kPi = std::numbers::pi;

// Arguments of arccos may exceed [-1, 1] by rounding only.
constexpr double kAcosSlack = 1e-12;

// Below this value of sin^2(el) the azimuth derivative is treated as singular.
constexpr double kAzimuthSingular = 1e-20;

double checked_acos(double c) {
  if (std::abs(c) > 1.0 + kAcosSlack) {
    throw Error(ErrorKind::InvalidArgument,
                "arccos argument " + std::to_string(c) + " outside [-1, 1]");
  }
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
  const double orth = (m.transpose() * m - Mat3::Identity()).norm();
  const double det = m.determinant();
  if (!m.allFinite() || orth > tol || std::abs(det - 1.0) > tol) {
    throw Error(ErrorKind::InvalidArgument,
                "matrix is not a rotation (orthogonality residual " + std::to_string(orth) +
                    ", det " + std::to_string(det) + ")");
  }
  return Rotation(m);
}

Rotation Rotation::nearest(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return Rotation(svd.matrixU() * d * svd.matrixV().transpose());
}

double Rotation::orthogonality_residual() const {
  return (m_.transpose() * m_ - Mat3::Identity()).norm();
}

Mat3 rot_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return m;
}

Mat3 rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return m;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return m;
}

double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Rotation euler_to_rotation(const EulerAngles& o) {
  return Rotation::from_matrix(rot_z(o.alpha) * rot_y(o.beta) * rot_x(o.gamma), 1e-12);
}

EulerAngles rotation_to_euler(const Rotation& r) {
  const Mat3& m = r.matrix();
  const double cos_beta = std::hypot(m(0, 0), m(1, 0));
  EulerAngles o;
  if (cos_beta < 1e-12) {
    o.beta = m(2, 0) < 0.0 ? kPi / 2 : -kPi / 2;
    o.gamma = 0.0;
    o.alpha = std::atan2(-m(0, 1), m(1, 1));
  } else {
    o.beta = std::atan2(-m(2, 0), cos_beta);
    o.alpha = std::atan2(m(1, 0), m(0, 0));
    o.gamma = std::atan2(m(2, 1), m(2, 2));
  }
  if (o.alpha <= -kPi) o.alpha += 2.0 * kPi;
  if (o.gamma <= -kPi) o.gamma += 2.0 * kPi;
  return o;
}

Rotation sample_uniform_rotation(std::mt19937_64& rng) {
  Eigen::Vector4d q;
  do {
    for (int i = 0; i < 4; ++i) q[i] = standard_normal(rng);
  } while (q.norm() < 1e-12);
  q.normalize();
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Mat3 m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
       2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
       2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y);
  return Rotation::nearest(m);
}

AoaPair aoa_from_matrix(const Mat3& m, const Vec3& p_ue, const Vec3& p_bs) {
  const Vec3 w = p_bs - p_ue;
  const double d = w.norm();
  if (!(d > 0.0)) {
    throw Error(ErrorKind::DegenerateGeometry,
                "degenerate geometry: base station coincides with the receiver");
  }
  const Vec3 q = m.transpose() * w;
  AoaPair a;
  a.el = checked_acos(q.z() / d);
  a.az = (q.x() == 0.0 && q.y() == 0.0) ? 0.0 : wrap_angle(std::atan2(q.y(), q.x()));
  return a;
}

AoaPair aoa_from_geometry(const Rotation& r, const Vec3& p_ue, const Vec3& p_bs) {
  return aoa_from_matrix(r.matrix(), p_ue, p_bs);
}

AoaGradients aoa_gradients(const Mat3& m, const Vec3& p_ue, const Vec3& p_bs) {
  const Vec3 diff = p_ue - p_bs;
  const double d = diff.norm();
  if (!(d > 0.0)) {
    throw Error(ErrorKind::DegenerateGeometry,
                "degenerate geometry: base station coincides with the receiver");
  }
  const Vec3 u = diff / d;
  const Vec3 x = m.transpose() * u;  // x_i = u_i^T R^T u^(m)

  const double den_el = 1.0 - x.z() * x.z();
  const double den_az = x.x() * x.x() + x.y() * x.y();
  if (den_el < kAzimuthSingular || den_az < kAzimuthSingular) {
    throw Error(ErrorKind::SingularGradient,
                "azimuth gradient singular: ray along the local Z axis");
  }

  AoaGradients g;
  g.d_el.setZero();
  g.d_el.col(2) = u / std::sqrt(den_el);
  g.d_az.setZero();
  g.d_az.col(0) = -x.y() * u / den_az;
  g.d_az.col(1) = x.x() * u / den_az;
  return g;
}

Eigen::MatrixXd aoa_jacobian(const Rotation& r, const Vec3& p_ue, std::span<const Vec3> bs) {
  const auto count = static_cast<Eigen::Index>(bs.size());
  Eigen::MatrixXd upsilon(9, 2 * count);
  for (Eigen::Index m = 0; m < count; ++m) {
    AoaGradients g;
    try {
      g = aoa_gradients(r.matrix(), p_ue, bs[static_cast<std::size_t>(m)]);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (base station " + std::to_string(m + 1) + ")");
    }
    upsilon.col(2 * m) = Eigen::Map<const Vector9d>(g.d_el.data());
    upsilon.col(2 * m + 1) = Eigen::Map<const Vector9d>(g.d_az.data());
  }
  return upsilon;
}

Eigen::VectorXd stacked_aoa(const Rotation& r, const Vec3& p_ue, std::span<const Vec3> bs) {
  Eigen::VectorXd theta(2 * static_cast<Eigen::Index>(bs.size()));
  for (std::size_t m = 0; m < bs.size(); ++m) {
    const AoaPair a = aoa_from_geometry(r, p_ue, bs[m]);
    theta[static_cast<Eigen::Index>(2 * m)] = a.el;
    theta[static_cast<Eigen::Index>(2 * m + 1)] = a.az;
  }
  return theta;
}

Vec3 q_from_aoa(const AoaPair& aoa, double distance) {
  if (!(distance > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "distance must be positive");
  }
  const double s = std::sin(aoa.el);
  return {distance * s * std::cos(aoa.az), distance * s * std::sin(aoa.az),
          distance * std::cos(aoa.el)};
}

}  // namespace orient3d
