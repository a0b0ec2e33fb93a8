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

// Monte Carlo trials and the two experiment drivers. Each driver has an
// OpenMP kernel and a serial reference kept for testing; both produce
// bit-identical results because seeds are fixed before dispatch and
// aggregation runs serially in index order.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orient3d/manifold.hpp"
#include "orient3d/scenario.hpp"
#include "orient3d/vonmises.hpp"

namespace orient3d {

inline constexpr int kDefaultTrials = 200;
inline constexpr int kDefaultGrid = 64;

struct TrialResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string failure;
  double ls_error_frob = 0.0;
  double ml_error_frob = 0.0;
  double ls_cost = 0.0;
  double ml_cost = 0.0;
  bool ls_converged = false;
  bool ml_converged = false;
};

enum class SweepAxis { Snr, Orientation };

struct SweepPoint {
  double snr_db = 0.0;  // Snr axis
  double alpha = 0.0;   // Orientation axis
  double gamma = 0.0;
  double oeb = 0.0;  // linear; +inf when flagged
  double rmse_ls = 0.0;
  double rmse_ml = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::Snr;
  std::vector<SweepPoint> points;
  int trials = 0;
};

// Draws measurements with a generator seeded from `seed`, then runs LS and
// ML. Calibration failures mark the trial as failed.
TrialResult run_trial(const Scenario& sc, std::uint64_t seed, const ManifoldOptions& opts = {});

// Same with concentrations already calibrated for sc.
TrialResult run_trial(const Scenario& sc, const ConcentrationVector& kappas, std::uint64_t seed,
                      const ManifoldOptions& opts = {});

// Trial i at every grid point uses seed base_seed + i. threads <= 0 uses the
// OpenMP default.
SweepResult rmse_vs_snr(const Scenario& sc, std::span<const double> snr_grid_db, int trials,
                        std::uint64_t base_seed, int threads = 0);
SweepResult rmse_vs_snr_serial(const Scenario& sc, std::span<const double> snr_grid_db, int trials,
                               std::uint64_t base_seed);

// OEB over (alpha, gamma) in [0, pi]^2 with beta fixed, alpha-major order.
// Configurations where calibration or the Jacobian is singular are recorded
// as +inf.
SweepResult oeb_orientation_grid(const Scenario& sc, double beta, int n_alpha, int n_gamma,
                                 int threads = 0);
SweepResult oeb_orientation_grid_serial(const Scenario& sc, double beta, int n_alpha,
                                        int n_gamma);

// Inclusive arithmetic grid; throws InvalidArgument on a non-positive step
// or max < min.
std::vector<double> snr_grid(double min_db, double max_db, double step_db);

// Serialises a sweep as CSV (see results_csv.cpp for the column layout).
std::string format_results(const SweepResult& sr);
void write_results(const SweepResult& sr, const std::string& path);
SweepResult parse_results(const std::string& text);
SweepResult read_results(const std::string& path);

}  // namespace orient3d
