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

#include "orient3d/crb.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "orient3d/error.hpp"

namespace orient3d {

Eigen::MatrixXd measurement_fim(const ConcentrationVector& kappas) {
  Eigen::MatrixXd fim = Eigen::MatrixXd::Zero(kappas.size(), kappas.size());
  for (Eigen::Index i = 0; i < kappas.size(); ++i) {
    if (!(kappas[i] >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument,
                  "concentration " + std::to_string(i) + " must be non-negative");
    }
    fim(i, i) = fisher_info(kappas[i]);
  }
  return fim;
}

Matrix93d constraint_basis(const Rotation& r) {
  const Mat3& m = r.matrix();
  const Vec3 r1 = m.col(0), r2 = m.col(1), r3 = m.col(2);
  Matrix93d basis = Matrix93d::Zero();
  basis.col(0) << -r3, Vec3::Zero(), r1;
  basis.col(1) << Vec3::Zero(), -r3, r2;
  basis.col(2) << r2, -r1, Vec3::Zero();
  return basis / std::numbers::sqrt2;
}

ConstrainedCrb constrained_crb(const Matrix9d& i_r, const Matrix93d& m_basis) {
  ConstrainedCrb out;
  Eigen::Matrix3d reduced = m_basis.transpose() * i_r * m_basis;
  reduced = 0.5 * (reduced + reduced.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(reduced);
  const Eigen::Vector3d lambda = eig.eigenvalues();  // ascending
  out.min_eigenvalue = lambda[0];
  out.condition_number =
      lambda[0] > 0.0 ? lambda[2] / lambda[0] : std::numeric_limits<double>::infinity();
  if (!(lambda[0] > 0.0) || !(out.condition_number <= kCrbConditionLimit)) {
    out.singular = true;
    out.crb.setConstant(std::numeric_limits<double>::infinity());
    return out;
  }
  const Eigen::Matrix3d inv =
      eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  out.crb = m_basis * inv * m_basis.transpose();
  return out;
}

FimBundle fim_bundle(const Rotation& r, const Vec3& p_ue, std::span<const Vec3> bs,
                     const ConcentrationVector& kappas) {
  if (kappas.size() != 2 * static_cast<Eigen::Index>(bs.size())) {
    throw Error(ErrorKind::InvalidArgument, "need two concentrations per base station");
  }
  FimBundle b;
  b.i_theta = measurement_fim(kappas);
  b.upsilon = aoa_jacobian(r, p_ue, bs);
  b.i_r = b.upsilon * b.i_theta.diagonal().asDiagonal() * b.upsilon.transpose();
  b.m_basis = constraint_basis(r);
  b.crb = constrained_crb(b.i_r, b.m_basis);
  b.oeb.min_eigenvalue = b.crb.min_eigenvalue;
  if (b.crb.singular) {
    b.oeb.infinite = true;
    b.oeb.value = std::numeric_limits<double>::infinity();
  } else {
    b.oeb.value = std::sqrt(std::max(0.0, b.crb.crb.trace()));
  }
  return b;
}

Oeb oeb(const Rotation& r, const Vec3& p_ue, std::span<const Vec3> bs,
        const ConcentrationVector& kappas) {
  return fim_bundle(r, p_ue, bs, kappas).oeb;
}

Oeb oeb(const Scenario& sc, const ConcentrationVector& kappas) {
  return oeb(euler_to_rotation(sc.true_orientation), sc.ue_position, sc.bs_positions, kappas);
}

}  // namespace orient3d
