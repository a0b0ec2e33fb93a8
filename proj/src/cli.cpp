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

#include "orient3d/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "orient3d/crb.hpp"
#include "orient3d/error.hpp"
#include "orient3d/sim.hpp"

namespace orient3d::cli {

namespace {

struct Options {
  std::string scenario_path;
  std::string out_path;
  std::string measurements_path;
  std::uint64_t seed = 1;
  int trials = kDefaultTrials;
  double snr_min = -40.0;
  double snr_max = 0.0;
  double snr_step = 5.0;
  std::optional<double> snr;
  double beta = -std::numbers::pi / 4;
  int grid = kDefaultGrid;
};

std::string fixed(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

double to_real(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::Parse, std::string("invalid ") + what + " '" + s + "'");
  }
  return v;
}

// ORIENT3D_THREADS caps the worker count; unset means the OpenMP default.
int thread_cap() {
  const char* env = std::getenv("ORIENT3D_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) {
    throw Error(ErrorKind::InvalidArgument, "ORIENT3D_THREADS must be a positive integer");
  }
  return static_cast<int>(v);
}

Scenario scenario_for(const Options& o) {
  return o.scenario_path.empty() ? default_scenario() : load_scenario(o.scenario_path);
}

void print_rotation(std::ostream& out, const Rotation& r) {
  const Mat3& m = r.matrix();
  for (int i = 0; i < 3; ++i) {
    out << "  [" << fixed(m(i, 0)) << ", " << fixed(m(i, 1)) << ", " << fixed(m(i, 2)) << "]\n";
  }
  const EulerAngles e = rotation_to_euler(r);
  out << "  euler_rad: alpha " << fixed(e.alpha) << ", beta " << fixed(e.beta) << ", gamma "
      << fixed(e.gamma) << '\n';
}

void print_report(std::ostream& out, const char* name, const OptimizeReport& rep) {
  out << name << ": cost " << general(rep.final_cost) << ", iterations " << rep.iterations
      << ", converged " << (rep.converged ? "yes" : "no");
  if (!rep.diagnostic.empty()) out << " (" << rep.diagnostic << ")";
  out << '\n';
  print_rotation(out, rep.minimizer);
}

int cmd_oeb_grid(const Options& o, std::ostream& out) {
  Scenario sc = scenario_for(o);
  if (o.snr) sc = sc.with_snr(*o.snr);
  const SweepResult sr = oeb_orientation_grid(sc, o.beta, o.grid, o.grid, thread_cap());
  const std::string path = o.out_path.empty() ? "oeb_grid.csv" : o.out_path;
  write_results(sr, path);

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  int above_one = 0, flagged = 0;
  for (const SweepPoint& p : sr.points) {
    if (std::isinf(p.oeb)) {
      ++flagged;
    } else {
      lo = std::min(lo, p.oeb);
      hi = std::max(hi, p.oeb);
    }
    if (!(p.oeb <= 1.0)) ++above_one;
  }
  out << "cells: " << sr.points.size() << '\n'
      << "min_oeb: " << general(lo) << '\n'
      << "max_finite_oeb: " << general(hi) << '\n'
      << "cells_above_1: " << above_one << '\n'
      << "flagged_infinite: " << flagged << '\n'
      << "wrote " << path << '\n';
  return kExitOk;
}

int cmd_rmse_sweep(const Options& o, std::ostream& out) {
  const Scenario sc = scenario_for(o);
  const std::vector<double> grid =
      o.snr ? std::vector<double>{*o.snr} : snr_grid(o.snr_min, o.snr_max, o.snr_step);
  if (o.trials < 1) throw Error(ErrorKind::InvalidArgument, "--trials must be at least 1");
  const SweepResult sr = rmse_vs_snr(sc, grid, o.trials, o.seed, thread_cap());
  const std::string path = o.out_path.empty() ? "rmse_sweep.csv" : o.out_path;
  write_results(sr, path);

  out << "snr_db        oeb           rmse_ls       rmse_ml       ok    failed\n";
  for (const SweepPoint& p : sr.points) {
    char row[160];
    std::snprintf(row, sizeof row, "%-13.2f %-13.6g %-13.6g %-13.6g %-5d %d\n", p.snr_db, p.oeb,
                  p.rmse_ls, p.rmse_ml, p.trials_ok, p.trials_failed);
    out << row;
  }
  out << "wrote " << path << '\n';
  return kExitOk;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const Scenario sc = scenario_for(o);
  std::ifstream in(o.measurements_path);
  if (!in) throw Error(ErrorKind::Io, "cannot open measurement file " + o.measurements_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const ParsedMeasurements pm = parse_measurements(buf.str(), sc);

  const EstimateResult est = estimate_orientation(pm.set);
  if (est.ls) {
    out << "ls_subset:";
    for (std::size_t m : est.subset) out << ' ' << m + 1;
    out << '\n';
    print_report(out, "ls", *est.ls);
  } else {
    out << "ls: failed (" << est.ls_error << "), ML initialised at identity\n";
  }
  print_report(out, "ml", est.ml);
  if (pm.has_kappas) {
    try {
      const Oeb b = oeb(est.ml.minimizer, pm.set.ue_position, pm.set.bs_positions, pm.set.kappas);
      out << "oeb: " << (b.infinite ? std::string("inf") : general(b.value)) << '\n';
    } catch (const Error& e) {
      out << "oeb: unavailable (" << e.what() << ")\n";
    }
  }
  return kExitOk;
}

bool is_config_error(ErrorKind k) {
  return k == ErrorKind::Io || k == ErrorKind::Parse || k == ErrorKind::InvalidArgument;
}

}  // namespace

ParsedMeasurements parse_measurements(const std::string& text, const Scenario& sc) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "measurement file is empty");
  const auto header = split_csv(line);
  const std::vector<std::string> base = {"bs_index", "el_rad", "az_rad"};
  const bool with_kappa = header.size() == 5 && header[3] == "kappa_el" && header[4] == "kappa_az";
  if (header.size() < 3 || !std::equal(base.begin(), base.end(), header.begin()) ||
      (header.size() != 3 && !with_kappa)) {
    throw Error(ErrorKind::Parse,
                "measurement header must be bs_index,el_rad,az_rad[,kappa_el,kappa_az]");
  }

  ParsedMeasurements pm;
  pm.has_kappas = with_kappa;
  pm.set.ue_position = sc.ue_position;
  std::vector<double> theta, kappas;
  std::vector<bool> seen(sc.bs_count(), false);
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::Parse, "wrong column count in measurement row: " + line);
    }
    const double index = to_real(cells[0], "bs_index");
    if (index != std::floor(index) || index < 1 || index > static_cast<double>(sc.bs_count())) {
      throw Error(ErrorKind::Parse, "bs_index " + cells[0] + " is not a scenario base station");
    }
    const auto m = static_cast<std::size_t>(index) - 1;
    if (seen[m]) throw Error(ErrorKind::Parse, "duplicate bs_index " + cells[0]);
    seen[m] = true;

    const double el = to_real(cells[1], "el_rad");
    const double az = to_real(cells[2], "az_rad");
    if (el < 0.0 || el > std::numbers::pi) {
      throw Error(ErrorKind::Parse, "el_rad " + cells[1] + " outside [0, pi]");
    }
    if (az < -std::numbers::pi || az > std::numbers::pi) {
      throw Error(ErrorKind::Parse, "az_rad " + cells[2] + " outside [-pi, pi]");
    }
    pm.set.bs_positions.push_back(sc.bs_positions[m]);
    theta.push_back(el);
    theta.push_back(az);
    if (with_kappa) {
      const double ke = to_real(cells[3], "kappa_el");
      const double ka = to_real(cells[4], "kappa_az");
      if (ke < 0.0 || ka < 0.0) throw Error(ErrorKind::Parse, "concentrations must be >= 0");
      kappas.push_back(ke);
      kappas.push_back(ka);
    } else {
      kappas.push_back(1.0);
      kappas.push_back(1.0);
    }
  }
  pm.set.theta_hat = Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
  pm.set.kappas = Eigen::Map<const Eigen::VectorXd>(kappas.data(), static_cast<Eigen::Index>(kappas.size()));
  return pm;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Absolute 3D orientation from mmWave angle-of-arrival measurements"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario_path, "Scenario JSON (default: built-in 2-BS scenario)");
    sub->add_option("--out", o.out_path, "Output CSV path");
  };

  auto* grid = app.add_subcommand("oeb-grid", "OEB over (alpha, gamma) with beta fixed");
  add_common(grid);
  grid->add_option("--beta", o.beta, "Fixed beta in radians")->capture_default_str();
  grid->add_option("--grid", o.grid, "Grid points per axis")->check(CLI::Range(2, 4096))->capture_default_str();
  grid->add_option("--snr", o.snr, "Override every link SNR (dB)");

  auto* sweep = app.add_subcommand("rmse-sweep", "LS/ML RMSE and OEB versus SNR");
  add_common(sweep);
  sweep->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  sweep->add_option("--trials", o.trials, "Monte Carlo trials per SNR point")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--snr-min", o.snr_min, "First SNR (dB)")->capture_default_str();
  sweep->add_option("--snr-max", o.snr_max, "Last SNR (dB)")->capture_default_str();
  sweep->add_option("--snr-step", o.snr_step, "SNR step (dB)")->capture_default_str();
  sweep->add_option("--snr", o.snr, "Single SNR point (dB), overrides the range");

  auto* estimate = app.add_subcommand("estimate", "LS and ML estimates from a measurement CSV");
  add_common(estimate);
  estimate->add_option("--measurements", o.measurements_path, "Measurement CSV")->required();

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("orient3d");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (grid->parsed()) return cmd_oeb_grid(o, out);
    if (sweep->parsed()) return cmd_rmse_sweep(o, out);
    return cmd_estimate(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::Underdetermined) {
      err << "at least 2 BSs should be used; add measurements from another base station\n";
    }
    return is_config_error(e.kind()) ? kExitConfig : kExitRuntime;
  }
}

}  // namespace orient3d::cli
