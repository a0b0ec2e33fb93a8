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

#pragma once

// Rotation representations, the angle-of-arrival forward model and the
// analytic derivatives of the arrival angles with respect to the rotation
// matrix.
//
// Conventions:
//  * Euler angles compose as R = Rz(alpha) * Ry(beta) * Rx(gamma).
//  * vec(R) stacks the columns r1, r2, r3 (Eigen's native column-major
//    layout), so a 3x3 gradient G maps to the 9-vector Map<Vector9d>(G).
//  * The local arrival direction of base station m is q = R^T (p_m - p).
//    Elevation is measured from the local +Z axis, azimuth from local +X
//    towards +Y.

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <span>

namespace orient3d {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vector9d = Eigen::Matrix<double, 9, 1>;
using Matrix9d = Eigen::Matrix<double, 9, 9>;

struct EulerAngles {
  double alpha = 0.0;  // about Z
  double beta = 0.0;   // about Y'
  double gamma = 0.0;  // about X''
};

// A 3x3 orthonormal matrix with determinant +1. Construction through
// from_matrix() validates the invariants.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }

  // Throws Error(InvalidArgument) if m^T m deviates from I by more than tol
  // (Frobenius) or det(m) from 1 by more than tol.
  static Rotation from_matrix(const Mat3& m, double tol = 1e-9);

  // Projects an arbitrary nonsingular matrix onto SO(3) (polar factor with
  // determinant correction).
  static Rotation nearest(const Mat3& m);

  const Mat3& matrix() const noexcept { return m_; }
  Vector9d vec() const { return Eigen::Map<const Vector9d>(m_.data()); }

  // ||m^T m - I||_F
  double orthogonality_residual() const;

  friend Rotation operator*(const Rotation& a, const Rotation& b) {
    Rotation r;
    r.m_ = a.m_ * b.m_;
    return r;
  }

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

struct AoaPair {
  double el = 0.0;  // [0, pi]
  double az = 0.0;  // (-pi, pi]
};

struct AoaGradients {
  Mat3 d_el;
  Mat3 d_az;
};

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

// Maps an angle to (-pi, pi].
double wrap_angle(double angle);

Rotation euler_to_rotation(const EulerAngles& o);

// Inverse of euler_to_rotation with alpha, gamma in (-pi, pi] and beta in
// [-pi/2, pi/2]. At gimbal lock (|beta| = pi/2) gamma is set to 0 and the
// whole residual rotation is carried by alpha.
EulerAngles rotation_to_euler(const Rotation& r);

// Uniform (Haar) sample on SO(3).
Rotation sample_uniform_rotation(std::mt19937_64& rng);

// Arrival angles of the ray from p_bs at a receiver located at p_ue with
// orientation r. Throws DegenerateGeometry when the positions coincide.
AoaPair aoa_from_geometry(const Rotation& r, const Vec3& p_ue, const Vec3& p_bs);

// Same model evaluated for an arbitrary 3x3 matrix. The elevation cosine is
// normalised by ||p_bs - p_ue||, which equals ||q|| whenever m is a rotation;
// this is the smooth extension used for ambient (9-dimensional) derivatives.
AoaPair aoa_from_matrix(const Mat3& m, const Vec3& p_ue, const Vec3& p_bs);

// d(el)/dR and d(az)/dR. Throws SingularGradient when the ray is along the
// local +-Z axis, where azimuth is undefined.
AoaGradients aoa_gradients(const Mat3& m, const Vec3& p_ue, const Vec3& p_bs);
inline AoaGradients aoa_gradients(const Rotation& r, const Vec3& p_ue, const Vec3& p_bs) {
  return aoa_gradients(r.matrix(), p_ue, p_bs);
}

// 9 x 2M Jacobian; column 2m holds vec(d el_m / dR), column 2m+1 holds
// vec(d az_m / dR).
Eigen::MatrixXd aoa_jacobian(const Rotation& r, const Vec3& p_ue, std::span<const Vec3> bs);

// Stacked (el_1, az_1, el_2, az_2, ...) for all base stations.
Eigen::VectorXd stacked_aoa(const Rotation& r, const Vec3& p_ue, std::span<const Vec3> bs);

// Local vector of length `distance` pointing along the given arrival angles.
Vec3 q_from_aoa(const AoaPair& aoa, double distance);

}  // namespace orient3d
