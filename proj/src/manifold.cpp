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

#include "orient3d/manifold.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "orient3d/error.hpp"

namespace orient3d {

namespace {

constexpr double kTangentTol = 1e-8;
constexpr double kDriftTol = 1e-8;

}  // namespace

void ManifoldOptions::validate() const {
  if (max_iters < 1 || !(grad_tol > 0.0) || !(initial_step > 0.0) ||
      !(armijo_c > 0.0 && armijo_c < 1.0) ||
      !(backtrack_factor > 0.0 && backtrack_factor < 1.0) || max_backtracks < 1) {
    throw Error(ErrorKind::InvalidArgument, "invalid manifold options");
  }
}

Mat3 skew(const Mat3& z) { return 0.5 * (z - z.transpose()); }

Mat3 proj_tangent(const Rotation& x, const Mat3& u) {
  return x.matrix() * skew(x.matrix().transpose() * u);
}

Mat3 inverse_sqrt_spd(const Mat3& a) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(a);
  const Eigen::Vector3d scale = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * scale.asDiagonal() * eig.eigenvectors().transpose();
}

Rotation retract(const Rotation& x, const Mat3& u) {
  const Mat3 xu = x.matrix().transpose() * u;
  const double sym = (0.5 * (xu + xu.transpose())).norm();
  if (sym > kTangentTol * std::max(1.0, u.norm())) {
    throw Error(ErrorKind::NotTangent,
                "not in tangent space (symmetric part " + std::to_string(sym) + ")");
  }
  // With U = X [w]x the polar factor of I + [w]x is the rotation by atan|w|
  // about w; this form keeps full precision for large tangents, where the
  // unit eigenvalue of I + U^T U is swamped.
  const Mat3 s = skew(xu);
  const double t2 = s(2, 1) * s(2, 1) + s(0, 2) * s(0, 2) + s(1, 0) * s(1, 0);
  const double root = std::sqrt(1.0 + t2);
  const Mat3 polar = Mat3::Identity() + s / root + (s * s) / (root * (1.0 + root));
  return Rotation::from_matrix(x.matrix() * polar, 1e-8);
}

OptimizeReport minimize(const CostFn& cost, const GradFn& euclidean_grad, const Rotation& x0,
                        const ManifoldOptions& opts) {
  opts.validate();
  OptimizeReport rep;
  Rotation x = x0;
  rep.minimizer = x;

  try {
    double f = cost(x.matrix());
    rep.initial_cost = f;
    rep.final_cost = f;
    Mat3 g = proj_tangent(x, euclidean_grad(x.matrix()));
    double gn = g.norm();
    rep.final_grad_norm = gn;

    double trial_step = opts.initial_step;
    while (true) {
      if (gn < opts.grad_tol) {
        rep.converged = true;
        break;
      }
      if (rep.iterations >= opts.max_iters) {
        rep.diagnostic = "iteration limit reached";
        break;
      }

      double step = trial_step;
      bool accepted = false;
      Rotation next;
      double f_next = f;
      for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
        next = retract(x, -step * g);
        f_next = cost(next.matrix());
        if (f_next <= f - opts.armijo_c * step * gn * gn) {
          accepted = true;
          break;
        }
        step *= opts.backtrack_factor;
      }
      if (!accepted) {
        rep.diagnostic =
            "line search failed after " + std::to_string(opts.max_backtracks) + " backtracks";
        break;
      }
      if (!(f_next < f)) {
        // The sufficient-decrease term fell below the cost's rounding.
        rep.diagnostic = "line search stalled: no cost decrease at working precision (gradient norm " +
                         std::to_string(gn) + ")";
        break;
      }

      if (next.orthogonality_residual() > kDriftTol) {
        std::clog << "orient3d: re-orthonormalising iterate " << rep.iterations << '\n';
        next = Rotation::nearest(next.matrix());
        f_next = cost(next.matrix());
      }

      rep.trace.push_back({f_next, gn, step});
      const Mat3 s = next.matrix() - x.matrix();
      const Mat3 g_prev = g;
      x = next;
      f = f_next;
      ++rep.iterations;
      rep.minimizer = x;
      rep.final_cost = f;

      g = proj_tangent(x, euclidean_grad(x.matrix()));
      gn = g.norm();
      rep.final_grad_norm = gn;

      if (opts.step_rule == StepRule::BarzilaiBorwein) {
        // Previous gradient transported by projection onto the new tangent space.
        const Mat3 y = g - proj_tangent(x, g_prev);
        const double sy = (s.array() * y.array()).sum();
        const double bb = s.squaredNorm() / sy;
        trial_step = (sy > 0.0 && std::isfinite(bb) && bb > 0.0) ? bb : opts.initial_step;
      }
    }
  } catch (const Error& e) {
    rep.converged = false;
    rep.diagnostic = e.what();
  }
  return rep;
}

}  // namespace orient3d
