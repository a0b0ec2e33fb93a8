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

// Constrained Fisher information for vec(R): measurement FIM, the chain rule
// to the nine rotation entries, the null-space basis of the orthogonality
// constraints, the constrained CRB and the orientation error bound (OEB).

#include <Eigen/Core>

#include <span>

#include "orient3d/geometry.hpp"
#include "orient3d/scenario.hpp"
#include "orient3d/vonmises.hpp"

namespace orient3d {

using Matrix93d = Eigen::Matrix<double, 9, 3>;

// M^T I(r) M with a condition number above this is treated as singular.
inline constexpr double kCrbConditionLimit = 1e12;

struct ConstrainedCrb {
  Matrix9d crb = Matrix9d::Zero();  // +inf entries when singular
  bool singular = false;
  double min_eigenvalue = 0.0;  // of M^T I(r) M
  double condition_number = 0.0;
};

// sqrt(trace(constrained CRB)); value is +inf when flagged.
struct Oeb {
  double value = 0.0;
  bool infinite = false;
  double min_eigenvalue = 0.0;
};

struct FimBundle {
  Eigen::MatrixXd i_theta;  // 2M x 2M, diagonal
  Eigen::MatrixXd upsilon;  // 9 x 2M
  Matrix9d i_r;             // upsilon * i_theta * upsilon^T
  Matrix93d m_basis;
  ConstrainedCrb crb;
  Oeb oeb;
};

// diag(kappa .* I1(kappa) ./ I0(kappa)). Throws InvalidArgument on negative
// entries.
Eigen::MatrixXd measurement_fim(const ConcentrationVector& kappas);

// Orthonormal basis of the tangent space of SO(3) at r in vec coordinates:
// columns (1/sqrt 2) vec(R S_k) for the three unit skew generators.
Matrix93d constraint_basis(const Rotation& r);

// M (M^T I M)^{-1} M^T. Works for any full-column-rank M; a uniform scaling
// of M leaves the result unchanged.
ConstrainedCrb constrained_crb(const Matrix9d& i_r, const Matrix93d& m_basis);

// Full pipeline from concentrations to the bound. SingularGradient errors
// from the Jacobian propagate.
FimBundle fim_bundle(const Rotation& r, const Vec3& p_ue, std::span<const Vec3> bs,
                     const ConcentrationVector& kappas);

Oeb oeb(const Rotation& r, const Vec3& p_ue, std::span<const Vec3> bs,
        const ConcentrationVector& kappas);

// At the scenario's true orientation.
Oeb oeb(const Scenario& sc, const ConcentrationVector& kappas);

}  // namespace orient3d
