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

// Von Mises circular distribution: density, sampling, Fisher information
// and the inverse map from an information value to a concentration.

#include <Eigen/Core>

#include "orient3d/random.hpp"

namespace orient3d {

struct VonMises {
  double mu = 0.0;     // mean direction, (-pi, pi]
  double kappa = 0.0;  // concentration, >= 0
};

// Per-angle concentrations ordered (el_1, az_1, el_2, az_2, ...).
using ConcentrationVector = Eigen::VectorXd;

// ln I0(x) for x >= 0, finite for every finite x.
double log_bessel_i0(double x);

// I1(x) / I0(x) for x >= 0.
double bessel_ratio(double x);

double log_pdf(const VonMises& d, double x);

// Best-Fisher rejection sampler. Result in (-pi, pi].
double sample(const VonMises& d, Rng& rng);

// kappa * I1(kappa) / I0(kappa)
double fisher_info(double kappa);

// Inverse of fisher_info. Throws NonPositiveInformation for target <= 0 and
// ConcentrationOverflow when the solution would exceed 1e12.
double solve_concentration(double target_info);

// kappa^T cos(theta_hat - theta); normalisation constants dropped.
double measurement_log_likelihood(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta,
                                  const ConcentrationVector& kappas);

}  // namespace orient3d
