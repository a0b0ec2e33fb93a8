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

// First-order Riemannian minimisation on SO(3): tangent projection, polar
// retraction and steepest descent with Armijo backtracking.

#include <functional>
#include <string>
#include <vector>

#include "orient3d/geometry.hpp"

namespace orient3d {

enum class StepRule {
  Constant,         // every line search starts at initial_step
  BarzilaiBorwein,  // first search at initial_step, later ones at the BB1 step
};

struct ManifoldOptions {
  int max_iters = 1000;
  double grad_tol = 1e-9;  // Frobenius norm of the Riemannian gradient
  double initial_step = 1.0;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;
  StepRule step_rule = StepRule::BarzilaiBorwein;

  void validate() const;
};

struct IterationRecord {
  double cost = 0.0;       // cost after the step
  double grad_norm = 0.0;  // Riemannian gradient norm before the step
  double step = 0.0;
};

struct OptimizeReport {
  Rotation minimizer;
  int iterations = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double final_grad_norm = 0.0;
  bool converged = false;
  std::string diagnostic;
  std::vector<IterationRecord> trace;
};

using CostFn = std::function<double(const Mat3&)>;
using GradFn = std::function<Mat3(const Mat3&)>;

Mat3 skew(const Mat3& z);

// X skew(X^T U)
Mat3 proj_tangent(const Rotation& x, const Mat3& u);

// (X + U)(I + U^T U)^{-1/2}. Throws NotTangent unless X^T U is skew to within
// 1e-8 relative to max(1, ||U||).
Rotation retract(const Rotation& x, const Mat3& u);

// Symmetric inverse square root of a symmetric positive definite 3x3 matrix.
Mat3 inverse_sqrt_spd(const Mat3& a);

// Minimises cost over SO(3) from x0. An orient3d::Error thrown by either
// callback stops the run with converged = false and the current iterate.
OptimizeReport minimize(const CostFn& cost, const GradFn& euclidean_grad, const Rotation& x0,
                        const ManifoldOptions& opts = {});

}  // namespace orient3d
