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

// Orientation estimators: least squares on the reconstructed local
// direction vectors (with its closed-form Procrustes counterpart) and the
// von Mises maximum-likelihood refinement.

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orient3d/geometry.hpp"
#include "orient3d/manifold.hpp"
#include "orient3d/vonmises.hpp"

namespace orient3d {

// Two base stations count as collinear with the receiver when their
// direction vectors are within this angle of parallel or anti-parallel.
inline constexpr double kCollinearAngle = 1e-3;

struct MeasurementSet {
  Eigen::VectorXd theta_hat;  // (el_1, az_1, el_2, az_2, ...)
  ConcentrationVector kappas;
  std::vector<Vec3> bs_positions;
  Vec3 ue_position = Vec3::Zero();

  std::size_t bs_count() const { return bs_positions.size(); }
  void validate() const;
};

struct LsMatrices {
  Eigen::Matrix3Xd q_mat;  // reconstructed local vectors
  Eigen::Matrix3Xd u_mat;  // p_m - p
};

bool directions_collinear(const Vec3& a, const Vec3& b);

// Subset indices are zero-based. Throws Underdetermined for fewer than two
// base stations and DegenerateSubset for a collinear pair.
LsMatrices build_ls_matrices(const MeasurementSet& ms, std::span<const std::size_t> subset);

double ls_cost(const LsMatrices& ls, const Mat3& r);
// -2 (U - R Q) Q^T
Mat3 ls_gradient(const LsMatrices& ls, const Mat3& r);

// Global minimiser of ||U - R Q||_F^2 over SO(3) via the SVD of U Q^T.
// Throws Unobservable if U Q^T has rank below two.
Rotation procrustes_solve(const LsMatrices& ls);

// Manifold descent on the LS cost from the identity.
OptimizeReport ls_estimate(const MeasurementSet& ms, std::span<const std::size_t> subset,
                           const ManifoldOptions& opts = {});

// -kappa^T cos(theta_hat - theta(R)) over all base stations.
double ml_cost(const MeasurementSet& ms, const Mat3& r);
Mat3 ml_gradient(const MeasurementSet& ms, const Mat3& r);

OptimizeReport ml_estimate(const MeasurementSet& ms, const Rotation& init,
                           const ManifoldOptions& opts = {});

// The k base stations with the largest sum of their two smallest
// concentrations among subsets without a collinear pair. Ties go to the
// lexicographically smallest index set. Throws DegenerateGeometry if no
// subset qualifies.
std::vector<std::size_t> select_bs_subset(const MeasurementSet& ms, std::size_t k);

struct EstimateResult {
  std::vector<std::size_t> subset;
  std::optional<OptimizeReport> ls;  // empty when LS failed
  std::string ls_error;
  OptimizeReport ml;
};

// LS on a selected pair, then ML over every base station initialised at the
// LS estimate (identity if LS failed).
EstimateResult estimate_orientation(const MeasurementSet& ms, const ManifoldOptions& opts = {},
                                    std::size_t ls_subset_size = 2);

}  // namespace orient3d
