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

#include "orient3d/estimators.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "orient3d/error.hpp"

namespace orient3d {

void MeasurementSet::validate() const {
  const auto n = 2 * static_cast<Eigen::Index>(bs_positions.size());
  if (theta_hat.size() != n || kappas.size() != n) {
    throw Error(ErrorKind::InvalidArgument,
                "measurement set needs two angles and two concentrations per base station");
  }
  if (!theta_hat.allFinite() || !kappas.allFinite() || (kappas.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidArgument, "angles must be finite and concentrations >= 0");
  }
}

bool directions_collinear(const Vec3& a, const Vec3& b) {
  const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
  return std::min(angle, std::numbers::pi - angle) <= kCollinearAngle;
}

LsMatrices build_ls_matrices(const MeasurementSet& ms, std::span<const std::size_t> subset) {
  ms.validate();
  if (subset.size() < 2) {
    throw Error(ErrorKind::Underdetermined,
                "underdetermined: at least 2 BSs should be used for orientation estimation");
  }
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= ms.bs_count()) {
      throw Error(ErrorKind::InvalidArgument, "subset index out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Vec3 a = ms.bs_positions[subset[i]] - ms.ue_position;
      const Vec3 b = ms.bs_positions[subset[j]] - ms.ue_position;
      if (subset[i] == subset[j] || directions_collinear(a, b)) {
        throw Error(ErrorKind::DegenerateSubset,
                    "degenerate subset: base stations " + std::to_string(subset[j] + 1) + " and " +
                        std::to_string(subset[i] + 1) + " are collinear with the receiver");
      }
    }
  }

  LsMatrices ls;
  const auto cols = static_cast<Eigen::Index>(subset.size());
  ls.q_mat.resize(3, cols);
  ls.u_mat.resize(3, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const std::size_t m = subset[static_cast<std::size_t>(c)];
    const Vec3 u = ms.bs_positions[m] - ms.ue_position;
    const auto row = static_cast<Eigen::Index>(2 * m);
    ls.u_mat.col(c) = u;
    ls.q_mat.col(c) = q_from_aoa({ms.theta_hat[row], ms.theta_hat[row + 1]}, u.norm());
  }
  return ls;
}

double ls_cost(const LsMatrices& ls, const Mat3& r) {
  return (ls.u_mat - r * ls.q_mat).squaredNorm();
}

Mat3 ls_gradient(const LsMatrices& ls, const Mat3& r) {
  return -2.0 * (ls.u_mat - r * ls.q_mat) * ls.q_mat.transpose();
}

Rotation procrustes_solve(const LsMatrices& ls) {
  const Mat3 h = ls.u_mat * ls.q_mat.transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  if (!(s[0] > 0.0) || s[1] <= 1e-12 * s[0]) {
    throw Error(ErrorKind::Unobservable, "orientation unobservable: U Q^T has rank below 2");
  }
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  Rotation r = Rotation::nearest(svd.matrixU() * d * svd.matrixV().transpose());

  // The SVD of U Q^T squares the conditioning for nearly parallel columns.
  // Gauss-Newton steps on R exp([w]x) work from the residuals directly; the
  // right-hand side is the cost gradient, so the optimum itself is unchanged.
  for (int it = 0; it < 2; ++it) {
    Mat3 normal = Mat3::Zero();
    Vec3 rhs = Vec3::Zero();
    for (Eigen::Index m = 0; m < ls.q_mat.cols(); ++m) {
      const Vec3 q = ls.q_mat.col(m);
      const Vec3 e = r.matrix().transpose() * ls.u_mat.col(m) - q;
      Mat3 qx;
      qx << 0, -q.z(), q.y(), q.z(), 0, -q.x(), -q.y(), q.x(), 0;
      normal += qx.transpose() * qx;
      rhs += q.cross(e);
    }
    const Vec3 w = normal.ldlt().solve(rhs);
    if (!w.allFinite()) break;
    r = r * Rotation::from_matrix(Eigen::AngleAxisd(w.norm(), w.norm() > 0 ? Vec3(w.normalized()) : Vec3::UnitZ())
                                      .toRotationMatrix());
  }
  return r;
}

OptimizeReport ls_estimate(const MeasurementSet& ms, std::span<const std::size_t> subset,
                           const ManifoldOptions& opts) {
  const LsMatrices ls = build_ls_matrices(ms, subset);
  return minimize([&](const Mat3& r) { return ls_cost(ls, r); },
                  [&](const Mat3& r) { return ls_gradient(ls, r); }, Rotation::identity(), opts);
}

double ml_cost(const MeasurementSet& ms, const Mat3& r) {
  double f = 0.0;
  for (std::size_t m = 0; m < ms.bs_count(); ++m) {
    const AoaPair a = aoa_from_matrix(r, ms.ue_position, ms.bs_positions[m]);
    const auto row = static_cast<Eigen::Index>(2 * m);
    f -= ms.kappas[row] * std::cos(ms.theta_hat[row] - a.el);
    f -= ms.kappas[row + 1] * std::cos(ms.theta_hat[row + 1] - a.az);
  }
  return f;
}

Mat3 ml_gradient(const MeasurementSet& ms, const Mat3& r) {
  Mat3 g = Mat3::Zero();
  for (std::size_t m = 0; m < ms.bs_count(); ++m) {
    const AoaPair a = aoa_from_matrix(r, ms.ue_position, ms.bs_positions[m]);
    const AoaGradients d = aoa_gradients(r, ms.ue_position, ms.bs_positions[m]);
    const auto row = static_cast<Eigen::Index>(2 * m);
    g -= ms.kappas[row] * std::sin(ms.theta_hat[row] - a.el) * d.d_el;
    g -= ms.kappas[row + 1] * std::sin(ms.theta_hat[row + 1] - a.az) * d.d_az;
  }
  return g;
}

namespace {

// ml_cost + sum(kappa), written as 2 kappa^T sin^2(residual / 2) so that
// small residuals are resolved near the optimum.
double ml_excess_cost(const MeasurementSet& ms, const Mat3& r) {
  double f = 0.0;
  for (std::size_t m = 0; m < ms.bs_count(); ++m) {
    const AoaPair a = aoa_from_matrix(r, ms.ue_position, ms.bs_positions[m]);
    const auto row = static_cast<Eigen::Index>(2 * m);
    const double s_el = std::sin(0.5 * (ms.theta_hat[row] - a.el));
    const double s_az = std::sin(0.5 * (ms.theta_hat[row + 1] - a.az));
    f += 2.0 * (ms.kappas[row] * s_el * s_el + ms.kappas[row + 1] * s_az * s_az);
  }
  return f;
}

}  // namespace

OptimizeReport ml_estimate(const MeasurementSet& ms, const Rotation& init,
                           const ManifoldOptions& opts) {
  ms.validate();
  OptimizeReport rep = minimize([&](const Mat3& r) { return ml_excess_cost(ms, r); },
                                [&](const Mat3& r) { return ml_gradient(ms, r); }, init, opts);
  const double offset = ms.kappas.sum();
  rep.initial_cost -= offset;
  rep.final_cost -= offset;
  for (IterationRecord& it : rep.trace) it.cost -= offset;
  return rep;
}

std::vector<std::size_t> select_bs_subset(const MeasurementSet& ms, std::size_t k) {
  ms.validate();
  const std::size_t n = ms.bs_count();
  if (k < 2 || k > n) {
    throw Error(ErrorKind::InvalidArgument, "subset size must satisfy 2 <= k <= M");
  }

  // Enumerate k-subsets in lexicographic order; a strict improvement is
  // required to replace the incumbent, which gives the lowest-index tie-break.
  std::vector<std::size_t> current(k);
  for (std::size_t i = 0; i < k; ++i) current[i] = i;
  std::vector<std::size_t> best;
  double best_score = -1.0;
  std::vector<double> ks;
  while (true) {
    bool admissible = true;
    for (std::size_t i = 0; i < k && admissible; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (directions_collinear(ms.bs_positions[current[i]] - ms.ue_position,
                                 ms.bs_positions[current[j]] - ms.ue_position)) {
          admissible = false;
          break;
        }
      }
    }
    if (admissible) {
      ks.clear();
      for (std::size_t m : current) {
        ks.push_back(ms.kappas[static_cast<Eigen::Index>(2 * m)]);
        ks.push_back(ms.kappas[static_cast<Eigen::Index>(2 * m + 1)]);
      }
      std::partial_sort(ks.begin(), ks.begin() + 2, ks.end());
      const double score = ks[0] + ks[1];
      if (score > best_score) {
        best_score = score;
        best = current;
      }
    }

    std::size_t i = k;
    while (i > 0 && current[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::size_t j = i; j < k; ++j) current[j] = current[j - 1] + 1;
  }

  if (best.empty()) {
    throw Error(ErrorKind::DegenerateGeometry,
                "degenerate geometry: every base-station subset is collinear with the receiver");
  }
  return best;
}

EstimateResult estimate_orientation(const MeasurementSet& ms, const ManifoldOptions& opts,
                                    std::size_t ls_subset_size) {
  ms.validate();
  if (ms.bs_count() < 2) {
    throw Error(ErrorKind::Underdetermined,
                "underdetermined: at least 2 BSs should be used for orientation estimation");
  }
  EstimateResult out;
  Rotation init = Rotation::identity();
  try {
    out.subset = select_bs_subset(ms, std::min(ls_subset_size, ms.bs_count()));
    out.ls = ls_estimate(ms, out.subset, opts);
    init = out.ls->minimizer;
  } catch (const Error& e) {
    out.ls_error = e.what();
  }
  out.ml = ml_estimate(ms, init, opts);
  return out;
}

}  // namespace orient3d
