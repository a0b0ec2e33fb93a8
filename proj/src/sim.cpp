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

#include "orient3d/sim.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "orient3d/crb.hpp"
#include "orient3d/error.hpp"
#include "orient3d/estimators.hpp"
#include "orient3d/geometry.hpp"
#include "orient3d/waveform.hpp"

namespace orient3d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

struct PointSetup {
  Scenario scenario;
  ConcentrationVector kappas;
  bool calibrated = false;
  std::string failure;
  double oeb = kInf;
};

PointSetup setup_point(const Scenario& base, double snr_db) {
  PointSetup p{base.with_snr(snr_db), {}, false, {}, kInf};
  try {
    p.kappas = calibrate_concentrations(p.scenario);
    p.calibrated = true;
    p.oeb = oeb(p.scenario, p.kappas).value;
  } catch (const Error& e) {
    p.failure = e.what();
  }
  return p;
}

TrialResult failed_trial(std::uint64_t seed, const std::string& reason) {
  TrialResult t;
  t.seed = seed;
  t.failure = reason;
  return t;
}

SweepPoint aggregate(double snr_db, double oeb_value, std::span<const TrialResult> trials) {
  SweepPoint pt;
  pt.snr_db = snr_db;
  pt.oeb = oeb_value;
  double sum_ls = 0.0, sum_ml = 0.0;
  for (const TrialResult& t : trials) {
    if (!t.ok) {
      ++pt.trials_failed;
      continue;
    }
    ++pt.trials_ok;
    sum_ls += t.ls_error_frob * t.ls_error_frob;
    sum_ml += t.ml_error_frob * t.ml_error_frob;
  }
  pt.rmse_ls = pt.trials_ok > 0 ? std::sqrt(sum_ls / pt.trials_ok) : kNaN;
  pt.rmse_ml = pt.trials_ok > 0 ? std::sqrt(sum_ml / pt.trials_ok) : kNaN;
  return pt;
}

double grid_value(int i, int n) {
  return std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1);
}

SweepPoint grid_point(const Scenario& sc, double beta, double alpha, double gamma) {
  SweepPoint pt;
  pt.alpha = alpha;
  pt.gamma = gamma;
  pt.rmse_ls = kNaN;
  pt.rmse_ml = kNaN;
  try {
    const Rotation r = euler_to_rotation({alpha, beta, gamma});
    const ConcentrationVector kappas = calibrate_concentrations(sc, r);
    pt.oeb = oeb(r, sc.ue_position, sc.bs_positions, kappas).value;
  } catch (const Error&) {
    pt.oeb = kInf;
  }
  return pt;
}

void check_grid_args(const Scenario& sc, int n_alpha, int n_gamma) {
  sc.validate();
  if (n_alpha < 2 || n_gamma < 2) {
    throw Error(ErrorKind::InvalidArgument, "grid sizes must be at least 2");
  }
}

void check_sweep_args(const Scenario& sc, int trials) {
  sc.validate();
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be at least 1");
}

}  // namespace

TrialResult run_trial(const Scenario& sc, const ConcentrationVector& kappas, std::uint64_t seed,
                      const ManifoldOptions& opts) {
  const Rotation truth = euler_to_rotation(sc.true_orientation);
  const Eigen::VectorXd theta = stacked_aoa(truth, sc.ue_position, sc.bs_positions);

  MeasurementSet ms;
  ms.bs_positions = sc.bs_positions;
  ms.ue_position = sc.ue_position;
  ms.kappas = kappas;
  ms.theta_hat.resize(theta.size());
  Rng rng(seed);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    ms.theta_hat[i] = sample(VonMises{theta[i], kappas[i]}, rng);
  }

  TrialResult t;
  t.seed = seed;
  try {
    const EstimateResult est = estimate_orientation(ms, opts);
    if (!est.ls) return failed_trial(seed, "least squares failed: " + est.ls_error);
    t.ls_error_frob = (truth.matrix() - est.ls->minimizer.matrix()).norm();
    t.ls_cost = est.ls->final_cost;
    t.ls_converged = est.ls->converged;
    t.ml_error_frob = (truth.matrix() - est.ml.minimizer.matrix()).norm();
    t.ml_cost = est.ml.final_cost;
    t.ml_converged = est.ml.converged;
    t.ok = true;
  } catch (const Error& e) {
    return failed_trial(seed, e.what());
  }
  return t;
}

TrialResult run_trial(const Scenario& sc, std::uint64_t seed, const ManifoldOptions& opts) {
  ConcentrationVector kappas;
  try {
    kappas = calibrate_concentrations(sc);
  } catch (const Error& e) {
    return failed_trial(seed, std::string("calibration failed: ") + e.what());
  }
  return run_trial(sc, kappas, seed, opts);
}

SweepResult rmse_vs_snr(const Scenario& sc, std::span<const double> snr_grid_db, int trials,
                        std::uint64_t base_seed, int threads) {
  check_sweep_args(sc, trials);
  SweepResult out;
  out.axis = SweepAxis::Snr;
  out.trials = trials;
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  const int workers = resolve_threads(threads);
  for (double snr : snr_grid_db) {
    const PointSetup setup = setup_point(sc, snr);
    if (setup.calibrated) {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
      for (int i = 0; i < trials; ++i) {
        results[static_cast<std::size_t>(i)] =
            run_trial(setup.scenario, setup.kappas, base_seed + static_cast<std::uint64_t>(i));
      }
    } else {
      for (int i = 0; i < trials; ++i) {
        results[static_cast<std::size_t>(i)] =
            failed_trial(base_seed + static_cast<std::uint64_t>(i), setup.failure);
      }
    }
    out.points.push_back(aggregate(snr, setup.oeb, results));
  }
  return out;
}

SweepResult rmse_vs_snr_serial(const Scenario& sc, std::span<const double> snr_grid_db, int trials,
                               std::uint64_t base_seed) {
  check_sweep_args(sc, trials);
  SweepResult out;
  out.axis = SweepAxis::Snr;
  out.trials = trials;
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  for (double snr : snr_grid_db) {
    const PointSetup setup = setup_point(sc, snr);
    for (int i = 0; i < trials; ++i) {
      const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
      results[static_cast<std::size_t>(i)] =
          setup.calibrated ? run_trial(setup.scenario, setup.kappas, seed)
                           : failed_trial(seed, setup.failure);
    }
    out.points.push_back(aggregate(snr, setup.oeb, results));
  }
  return out;
}

SweepResult oeb_orientation_grid(const Scenario& sc, double beta, int n_alpha, int n_gamma,
                                 int threads) {
  check_grid_args(sc, n_alpha, n_gamma);
  SweepResult out;
  out.axis = SweepAxis::Orientation;
  out.points.resize(static_cast<std::size_t>(n_alpha) * static_cast<std::size_t>(n_gamma));
  const int total = n_alpha * n_gamma;
  const int workers = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers)
  for (int k = 0; k < total; ++k) {
    const int i = k / n_gamma, j = k % n_gamma;
    out.points[static_cast<std::size_t>(k)] =
        grid_point(sc, beta, grid_value(i, n_alpha), grid_value(j, n_gamma));
  }
  return out;
}

SweepResult oeb_orientation_grid_serial(const Scenario& sc, double beta, int n_alpha,
                                        int n_gamma) {
  check_grid_args(sc, n_alpha, n_gamma);
  SweepResult out;
  out.axis = SweepAxis::Orientation;
  out.points.reserve(static_cast<std::size_t>(n_alpha) * static_cast<std::size_t>(n_gamma));
  for (int i = 0; i < n_alpha; ++i) {
    for (int j = 0; j < n_gamma; ++j) {
      out.points.push_back(grid_point(sc, beta, grid_value(i, n_alpha), grid_value(j, n_gamma)));
    }
  }
  return out;
}

std::vector<double> snr_grid(double min_db, double max_db, double step_db) {
  if (!(step_db > 0.0) || !(max_db >= min_db)) {
    throw Error(ErrorKind::InvalidArgument, "SNR grid needs step > 0 and max >= min");
  }
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((max_db - min_db) / step_db + 1e-9));
  for (long k = 0; k <= count; ++k) grid.push_back(min_db + static_cast<double>(k) * step_db);
  return grid;
}

}  // namespace orient3d
