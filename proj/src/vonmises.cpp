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

#include "orient3d/vonmises.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "orient3d/error.hpp"
#include "orient3d/geometry.hpp"

namespace orient3d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesSwitch = 15.0;
constexpr double kMaxConcentration = 1e12;

struct SeriesPair {
  double i0;
  double i1;
};

// Ascending power series; all terms positive, so no cancellation.
SeriesPair power_series(double x) {
  const double q = 0.25 * x * x;
  double t0 = 1.0, s0 = 1.0;
  double t1 = 1.0, s1 = 1.0;
  for (int k = 1; k < 500; ++k) {
    t0 *= q / (static_cast<double>(k) * k);
    t1 *= q / (static_cast<double>(k) * (k + 1));
    s0 += t0;
    s1 += t1;
    if (t0 < 1e-17 * s0 && t1 < 1e-17 * s1) break;
  }
  return {s0, 0.5 * x * s1};
}

// Hankel expansion of e^{-x} sqrt(2 pi x) I_nu(x), truncated at the smallest
// term.
double scaled_asymptotic(double x, int nu) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double log_bessel_i0(double x) {
  x = std::abs(x);
  if (x < kSeriesSwitch) return std::log(power_series(x).i0);
  return x - 0.5 * std::log(2.0 * kPi * x) + std::log(scaled_asymptotic(x, 0));
}

double bessel_ratio(double x) {
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  double r;
  if (ax < kSeriesSwitch) {
    const SeriesPair s = power_series(ax);
    r = s.i1 / s.i0;
  } else {
    r = scaled_asymptotic(ax, 1) / scaled_asymptotic(ax, 0);
  }
  return x < 0.0 ? -r : r;
}

double log_pdf(const VonMises& d, double x) {
  return d.kappa * std::cos(x - d.mu) - std::log(2.0 * kPi) - log_bessel_i0(d.kappa);
}

double sample(const VonMises& d, Rng& rng) {
  const double kappa = d.kappa;
  if (kappa < 1e-8) {
    return wrap_angle(d.mu + kPi * (1.0 - 2.0 * unit_uniform(rng)));
  }

  // Wrapped-Cauchy envelope parameter rho and s = (1 + rho^2) / (2 rho),
  // carried as delta = s - 1 so that large concentrations keep precision.
  const double root = std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double tau = 1.0 + root;
  const double rho = 2.0 * kappa / (tau + std::sqrt(2.0 * tau));
  double one_minus_rho;
  if (kappa < 1.0) {
    one_minus_rho = 1.0 - rho;
  } else {
    const double two_kappa_minus_tau = -1.0 - 1.0 / (root + 2.0 * kappa);
    one_minus_rho = (two_kappa_minus_tau + std::sqrt(2.0 * tau)) / (2.0 * kappa);
  }
  const double delta = one_minus_rho * one_minus_rho / (2.0 * rho);
  const double s = 1.0 + delta;

  double one_minus_w = 0.0;
  for (;;) {
    const double half = 0.5 * kPi * unit_uniform(rng);
    const double sin_half = std::sin(half), cos_half = std::cos(half);
    const double one_minus_z = 2.0 * sin_half * sin_half;
    const double denom = delta + 2.0 * cos_half * cos_half;  // s + z
    const double y = kappa * delta * (s + 1.0) / denom;    // kappa (s - w)
    const double v = open_unit_uniform(rng);
    one_minus_w = delta * one_minus_z / denom;
    if (y * (2.0 - y) - v > 0.0) break;
    if (std::log(y / v) + 1.0 - y >= 0.0) break;
  }
  double theta = 2.0 * std::asin(std::sqrt(std::min(1.0, 0.5 * one_minus_w)));
  if (unit_uniform(rng) < 0.5) theta = -theta;
  return wrap_angle(d.mu + theta);
}

double fisher_info(double kappa) {
  if (kappa <= 0.0) return 0.0;
  return kappa * bessel_ratio(kappa);
}

double solve_concentration(double target_info) {
  if (!(target_info > 0.0)) {
    throw Error(ErrorKind::NonPositiveInformation,
                "non-positive information target " + std::to_string(target_info));
  }
  if (!std::isfinite(target_info) || target_info > fisher_info(kMaxConcentration)) {
    throw Error(ErrorKind::ConcentrationOverflow,
                "concentration overflow for information target " + std::to_string(target_info));
  }

  // fisher_info(k) > k - 0.625 for k >= 1, so target + 1 brackets the root.
  double lo = 0.0;
  double hi = std::min(target_info + 1.0, kMaxConcentration);
  double kappa = target_info < 1.0 ? std::sqrt(2.0 * target_info) : target_info + 0.5;
  kappa = std::clamp(kappa, lo, hi);

  for (int iter = 0; iter < 300; ++iter) {
    const double ratio = bessel_ratio(kappa);
    const double f = kappa * ratio - target_info;
    if (std::abs(f) <= 1e-15 * target_info) break;
    if (f > 0.0) {
      hi = kappa;
    } else {
      lo = kappa;
    }
    const double slope = kappa * (1.0 - ratio * ratio);
    double next = slope > 0.0 ? kappa - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      kappa = next;
      break;
    }
    kappa = next;
  }
  return kappa;
}

double measurement_log_likelihood(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta,
                                  const ConcentrationVector& kappas) {
  if (theta_hat.size() != theta.size() || theta.size() != kappas.size()) {
    throw Error(ErrorKind::InvalidArgument, "length mismatch in measurement likelihood");
  }
  return kappas.dot((theta_hat - theta).array().cos().matrix());
}

}  // namespace orient3d
