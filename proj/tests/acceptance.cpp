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

// Acceptance checks. Each criterion prints one PASS/FAIL line with the
// measured quantities; `--criterion N` runs a single one, no arguments runs
// all of them. The exit status is nonzero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "orient3d/crb.hpp"
#include "orient3d/error.hpp"
#include "orient3d/estimators.hpp"
#include "orient3d/manifold.hpp"
#include "orient3d/scenario.hpp"
#include "orient3d/sim.hpp"
#include "orient3d/vonmises.hpp"
#include "orient3d/waveform.hpp"

namespace {

using namespace orient3d;
using orient3d::testing::kPi;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

MeasurementSet noiseless(const Rotation& r, const Vec3& p_ue, const std::vector<Vec3>& bs,
                         const ConcentrationVector& kappas) {
  MeasurementSet ms;
  ms.theta_hat = stacked_aoa(r, p_ue, bs);
  ms.kappas = kappas;
  ms.bs_positions = bs;
  ms.ue_position = p_ue;
  return ms;
}

// 1. Constrained CRB against the Euler-chart bound.
Outcome criterion_oeb_oracle() {
  Stopwatch sw;
  Rng rng(101);
  double worst = 0.0;
  int done = 0, flagged = 0;
  while (done < 100) {
    const EulerAngles o{testing::uniform_in(rng, -kPi, kPi), testing::uniform_in(rng, -kPi / 2 + 0.1, kPi / 2 - 0.1),
                        testing::uniform_in(rng, -kPi, kPi)};
    Scenario sc;
    sc.true_orientation = o;
    sc.ue_position = testing::random_point(rng, 50.0);
    const int stations = 2 + done % 2;
    for (int m = 0; m < stations; ++m) {
      sc.bs_positions.push_back(testing::random_point(rng, 100.0));
      sc.snr_db.push_back(testing::uniform_in(rng, -20.0, 20.0));
    }
    const Rotation r = euler_to_rotation(o);
    FimBundle b;
    try {
      b = fim_bundle(r, sc.ue_position, sc.bs_positions, calibrate_concentrations(sc));
    } catch (const Error&) {
      continue;  // degenerate draw (boresight ray)
    }
    if (b.oeb.infinite) {
      ++flagged;
      continue;
    }
    const double chart = testing::euler_chart_bound(o, b.i_r);
    worst = std::max(worst, std::abs(b.oeb.value / chart - 1.0));
    ++done;
  }
  const double t = sw.seconds();
  return {worst < 1e-6 && t < 10.0, "max relative error " + fmt("%.3e", worst) + " over 100 scenarios (" +
                                        std::to_string(flagged) + " flagged draws skipped), " +
                                        fmt("%.2f", t) + " s"};
}

// 2. RMSE versus SNR on the reference scenario.
Outcome criterion_rmse_sweep() {
  Stopwatch sw;
  const std::vector<double> grid = snr_grid(-40.0, 0.0, 5.0);
  const SweepResult sr = rmse_vs_snr(default_scenario(), grid, kDefaultTrials, 1);
  bool pass = true;
  std::string detail;
  for (const SweepPoint& p : sr.points) {
    const double ratio = p.rmse_ml / p.oeb;
    const bool tracks = p.snr_db < -20.0 || std::abs(ratio - 1.0) < 0.10;
    const bool ordered = p.rmse_ls >= p.rmse_ml;
    pass = pass && tracks && ordered && p.trials_failed == 0;
    detail += "\n    snr " + fmt("%6.1f", p.snr_db) + " dB  oeb " + fmt("%.5f", p.oeb) + "  ml " +
              fmt("%.5f", p.rmse_ml) + "  ls " + fmt("%.5f", p.rmse_ls) + "  ml/oeb " + fmt("%.4f", ratio) +
              (p.snr_db >= -20.0 ? (tracks ? "" : "  [>10%]") : "  (not checked)") + (ordered ? "" : "  [ls<ml]");
  }
  const double t = sw.seconds();
  pass = pass && t < 180.0;
  return {pass, std::to_string(kDefaultTrials) + " trials, seed 1, " + fmt("%.2f", t) + " s" + detail};
}

// 3. OEB orientation grids with two and three base stations.
Outcome criterion_oeb_grids() {
  Stopwatch sw;
  const int n = kDefaultGrid;
  const double beta = -kPi / 4;
  const SweepResult two = oeb_orientation_grid(default_scenario(-10.0), beta, n, n);
  const SweepResult three = oeb_orientation_grid(default_scenario_three_bs(-10.0), beta, n, n);
  const double step = kPi / (n - 1);
  int peak_near = 0, above_two = 0, above_three = 0, violations = 0;
  double max_two = 0.0, max_three = 0.0;
  for (std::size_t i = 0; i < two.points.size(); ++i) {
    const SweepPoint& p = two.points[i];
    const SweepPoint& q = three.points[i];
    const bool near = std::abs(p.alpha - kPi / 2) <= 2 * step && std::abs(p.gamma - kPi / 4) <= 2 * step;
    if (!(p.oeb <= 1.0)) {
      ++above_two;
      if (near) ++peak_near;
    }
    if (!(q.oeb <= 1.0)) ++above_three;
    if (!(q.oeb <= p.oeb * (1 + 1e-12))) ++violations;
    max_two = std::max(max_two, p.oeb);
    max_three = std::max(max_three, q.oeb);
  }
  const double t = sw.seconds();
  const bool pass = peak_near >= 1 && above_three == 0 && violations == 0 && t < 60.0;
  return {pass, "2-BS cells with OEB>1: " + std::to_string(above_two) + " (" + std::to_string(peak_near) +
                    " within 2 cells of (pi/2, pi/4)), max " + fmt("%.4f", max_two) +
                    "; 3-BS cells with OEB>1: " + std::to_string(above_three) + ", max " + fmt("%.4f", max_three) +
                    "; pointwise 3-BS<=2-BS violations: " + std::to_string(violations) + ", " + fmt("%.2f", t) + " s"};
}

// 4. Exact recovery from noiseless measurements.
Outcome criterion_exact_recovery() {
  Stopwatch sw;
  Rng rng(404);
  double worst_p = 0.0, worst_ls = 0.0, worst_ml = 0.0;
  int done = 0;
  const std::vector<std::size_t> pair{0, 1};
  while (done < 1000) {
    const Rotation truth = sample_uniform_rotation(rng);
    const Vec3 p_ue = testing::random_point(rng, 50.0);
    const std::vector<Vec3> bs{testing::random_point(rng, 100.0), testing::random_point(rng, 100.0)};
    if (directions_collinear(bs[0] - p_ue, bs[1] - p_ue)) continue;
    ConcentrationVector k(4);
    for (int i = 0; i < 4; ++i) k[i] = std::exp(testing::uniform_in(rng, 0.0, 10.0));
    MeasurementSet ms;
    try {
      (void)aoa_jacobian(truth, p_ue, bs);
      ms = noiseless(truth, p_ue, bs, k);
    } catch (const Error&) {
      continue;  // boresight ray, AoA gradient undefined
    }
    worst_p = std::max(worst_p, (procrustes_solve(build_ls_matrices(ms, pair)).matrix() - truth.matrix()).norm());
    const EstimateResult est = estimate_orientation(ms);
    worst_ls = std::max(worst_ls, est.ls ? (est.ls->minimizer.matrix() - truth.matrix()).norm() : INFINITY);
    worst_ml = std::max(worst_ml, (est.ml.minimizer.matrix() - truth.matrix()).norm());
    ++done;
  }
  const double t = sw.seconds();
  const bool pass = worst_p < 1e-12 && worst_ls < 1e-6 && worst_ml < 1e-8 && t < 30.0;
  return {pass, "max Frobenius error: procrustes " + fmt("%.2e", worst_p) + ", ls " + fmt("%.2e", worst_ls) +
                    ", ml " + fmt("%.2e", worst_ml) + " over 1000 cases, " + fmt("%.2f", t) + " s"};
}

// 5. Analytic gradients against central differences.
Outcome criterion_gradients() {
  Rng rng(505);
  double w_el = 0, w_az = 0, w_ls = 0, w_ml = 0, w_st = 0;
  for (int k = 0; k < 100; ++k) {
    const testing::RayConfig c = testing::random_general_ray(rng);
    const AoaGradients g = aoa_gradients(c.r, c.p_ue, c.p_bs);
    w_el = std::max(w_el, testing::relative_error(g.d_el, testing::numeric_gradient(
        [&](const Mat3& m) { return aoa_from_matrix(m, c.p_ue, c.p_bs).el; }, c.r)));
    w_az = std::max(w_az, testing::relative_error(g.d_az, testing::numeric_gradient(
        [&](const Mat3& m) { return aoa_from_matrix(m, c.p_ue, c.p_bs).az; }, c.r)));

    const Rotation r = Rotation::nearest(c.r);
    const Vec3 second = c.p_ue + c.r * q_from_aoa({testing::uniform_in(rng, 0.3, 2.8), testing::uniform_in(rng, -2.8, 2.8)},
                                                  testing::uniform_in(rng, 10, 100));
    const std::vector<Vec3> bs{c.p_bs, second};
    ConcentrationVector kap(4);
    for (int i = 0; i < 4; ++i) kap[i] = testing::uniform_in(rng, 0.5, 50.0);
    MeasurementSet ms = noiseless(r, c.p_ue, bs, kap);
    for (int i = 0; i < 4; ++i) ms.theta_hat[i] += testing::uniform_in(rng, -0.3, 0.3);
    const Mat3 x = sample_uniform_rotation(rng).matrix();
    const std::vector<std::size_t> pair{0, 1};
    const LsMatrices ls = build_ls_matrices(ms, pair);
    w_ls = std::max(w_ls, testing::relative_error(ls_gradient(ls, x), testing::numeric_gradient(
        [&](const Mat3& m) { return ls_cost(ls, m); }, x, 1e-4)));
    w_ml = std::max(w_ml, testing::relative_error(ml_gradient(ms, c.r), testing::numeric_gradient(
        [&](const Mat3& m) { return ml_cost(ms, m); }, c.r)));

    const Upa upa;
    const AoaPair aoa{testing::uniform_in(rng, 0.05, kPi - 0.05), testing::uniform_in(rng, -kPi, kPi)};
    const Eigen::MatrixX2cd d = steering_derivatives(upa, aoa);
    const double h = 1e-6;
    const Eigen::VectorXcd fd_el =
        (steering_vector(upa, {aoa.el + h, aoa.az}) - steering_vector(upa, {aoa.el - h, aoa.az})) / (2 * h);
    const Eigen::VectorXcd fd_az =
        (steering_vector(upa, {aoa.el, aoa.az + h}) - steering_vector(upa, {aoa.el, aoa.az - h})) / (2 * h);
    w_st = std::max({w_st, (d.col(0) - fd_el).norm() / fd_el.norm(), (d.col(1) - fd_az).norm() / fd_az.norm()});
  }
  const bool pass = std::max({w_el, w_az, w_ls, w_ml, w_st}) < 1e-5;
  return {pass, "max relative error over 100 points: d_el " + fmt("%.2e", w_el) + ", d_az " + fmt("%.2e", w_az) +
                    ", ls " + fmt("%.2e", w_ls) + ", ml " + fmt("%.2e", w_ml) + ", steering " + fmt("%.2e", w_st)};
}

// 6. Von Mises Fisher information against quadrature, and its inverse.
Outcome criterion_vonmises() {
  double worst_q = 0.0, worst_rt = 0.0;
  for (double kappa : {0.1, 1.0, 2.0, 10.0, 50.0}) {
    worst_q = std::max(worst_q, std::abs(fisher_info(kappa) - testing::quadrature_fisher_info(kappa)));
  }
  for (double e = -6.0; e <= 9.0; e += 0.25) {
    const double kappa = std::pow(10.0, e);
    worst_rt = std::max(worst_rt, std::abs(solve_concentration(fisher_info(kappa)) / kappa - 1.0));
  }
  return {worst_q < 1e-8 && worst_rt < 1e-9, "max |fisher_info - quadrature| " + fmt("%.2e", worst_q) +
                                                 ", max round-trip relative error " + fmt("%.2e", worst_rt) +
                                                 " (kappa 1e-6 .. 1e9)"};
}

// 7. Retraction stays on SO(3); Armijo descent is monotone.
Outcome criterion_manifold() {
  Rng rng(707);
  double worst_orth = 0.0, worst_det = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Rotation x = sample_uniform_rotation(rng);
    Mat3 z;
    for (int i = 0; i < 9; ++i) z(i) = standard_normal(rng);
    const Mat3 u = x.matrix() * skew(std::exp(testing::uniform_in(rng, -6.0, 4.0)) * z);
    const Rotation y = retract(x, u);
    worst_orth = std::max(worst_orth, y.orthogonality_residual());
    worst_det = std::max(worst_det, std::abs(y.matrix().determinant() - 1.0));
  }

  int trajectories = 0, steps = 0, bad = 0;
  const ManifoldOptions opts;
  const auto check = [&](const OptimizeReport& rep) {
    ++trajectories;
    double prev = rep.initial_cost;
    for (const IterationRecord& it : rep.trace) {
      ++steps;
      const double bound = prev - opts.armijo_c * it.step * it.grad_norm * it.grad_norm;
      if (!(it.cost <= prev) || !(it.cost <= bound + 1e-15 * std::abs(prev))) ++bad;
      prev = it.cost;
    }
  };
  for (double snr : {-30.0, -10.0, 10.0}) {
    const Scenario sc = default_scenario_three_bs(snr);
    const Rotation truth = euler_to_rotation(sc.true_orientation);
    const ConcentrationVector kap = calibrate_concentrations(sc);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      MeasurementSet ms = noiseless(truth, sc.ue_position, sc.bs_positions, kap);
      Rng noise(seed);
      for (Eigen::Index i = 0; i < ms.theta_hat.size(); ++i) ms.theta_hat[i] = sample({ms.theta_hat[i], kap[i]}, noise);
      const EstimateResult est = estimate_orientation(ms);
      if (est.ls) check(*est.ls);
      check(est.ml);
    }
  }
  const bool pass = worst_orth < 1e-12 && worst_det < 1e-12 && bad == 0;
  return {pass, "retraction: max orthogonality residual " + fmt("%.2e", worst_orth) + ", max |det-1| " +
                    fmt("%.2e", worst_det) + " over 1000 tangents; Armijo/monotone violations " + std::to_string(bad) +
                    " in " + std::to_string(steps) + " steps over " + std::to_string(trajectories) + " trajectories"};
}

// 8. Repeated CLI runs write identical files.
Outcome criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "orient3d_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = ORIENT3D_CLI_PATH;
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const auto run = [&](const std::string& args, const std::string& stdout_name) {
    const std::string cmd = "\"" + cli + "\" " + args + " > \"" + (dir / stdout_name).string() + "\" 2>&1";
    return std::system(cmd.c_str());
  };

  // Noiseless measurement file for the estimate command.
  const Scenario sc = default_scenario();
  const Eigen::VectorXd t = stacked_aoa(euler_to_rotation(sc.true_orientation), sc.ue_position, sc.bs_positions);
  {
    std::ofstream m(dir / "meas.csv");
    char row[160];
    m << "bs_index,el_rad,az_rad,kappa_el,kappa_az\n";
    for (std::size_t i = 0; i < sc.bs_count(); ++i) {
      std::snprintf(row, sizeof row, "%zu,%.17g,%.17g,100,200\n", i + 1, t[2 * i] + 0.01, t[2 * i + 1] - 0.02);
      m << row;
    }
  }

  struct Case {
    std::string name;
    std::string args;
    bool csv;
  };
  const std::vector<Case> cases{
      {"oeb-grid", "oeb-grid --grid 64 --out \"" + (dir / "grid_%d.csv").string() + "\"", true},
      {"rmse-sweep", "rmse-sweep --seed 1 --trials 200 --out \"" + (dir / "sweep_%d.csv").string() + "\"", true},
      {"estimate", "estimate --measurements \"" + (dir / "meas.csv").string() + "\"", false},
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    std::string outputs[2];
    bool ran = true;
    for (int k = 0; k < 2; ++k) {
      std::string args = c.args;
      const auto pos = args.find("%d");
      if (pos != std::string::npos) args.replace(pos, 2, std::to_string(k));
      const std::string log = c.name + "_" + std::to_string(k) + ".log";
      ran = ran && run(args, log) == 0;
      if (c.csv) {
        outputs[k] = slurp(dir / (c.name == "oeb-grid" ? "grid_" + std::to_string(k) + ".csv"
                                                        : "sweep_" + std::to_string(k) + ".csv"));
      } else {
        outputs[k] = slurp(dir / log);
      }
    }
    const bool same = ran && !outputs[0].empty() && outputs[0] == outputs[1];
    pass = pass && same;
    detail += " " + c.name + (same ? " identical" : " DIFFERENT") + " (" + std::to_string(outputs[0].size()) + " bytes);";
  }
  fs::remove_all(dir);
  return {pass, detail};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"OEB-stack oracle equivalence", criterion_oeb_oracle},
    {"RMSE vs SNR tracks the bound", criterion_rmse_sweep},
    {"OEB orientation grids", criterion_oeb_grids},
    {"exact recovery", criterion_exact_recovery},
    {"gradient suite", criterion_gradients},
    {"von Mises FIM oracle", criterion_vonmises},
    {"manifold invariants", criterion_manifold},
    {"CLI determinism", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) selected.push_back(i);
  }

  int failed = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", id);
      return 2;
    }
    const auto& [name, fn] = kCriteria[static_cast<std::size_t>(id - 1)];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
