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

// CSV layout, UTF-8 with a header row and one row per sweep point:
//   SNR sweeps:          snr_db,oeb,oeb_db,rmse_ls,rmse_ml,trials_ok,trials_failed
//   orientation sweeps:  alpha_rad,gamma_rad,oeb,oeb_db,rmse_ls,rmse_ml,trials_ok,trials_failed
// Reals use 17 significant digits; infinities are written as inf and
// undefined values (no successful trials) as nan. oeb_db = 10 log10(oeb).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "orient3d/error.hpp"
#include "orient3d/sim.hpp"

namespace orient3d {

namespace {

constexpr const char* kSnrHeader = "snr_db,oeb,oeb_db,rmse_ls,rmse_ml,trials_ok,trials_failed";
constexpr const char* kGridHeader =
    "alpha_rad,gamma_rad,oeb,oeb_db,rmse_ls,rmse_ml,trials_ok,trials_failed";

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorKind::Parse, "bad number '" + s + "' in results CSV");
  }
  return v;
}

int parse_int(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorKind::Parse, "bad integer '" + s + "' in results CSV");
  }
  return static_cast<int>(v);
}

}  // namespace

std::string format_results(const SweepResult& sr) {
  std::string out = sr.axis == SweepAxis::Snr ? kSnrHeader : kGridHeader;
  out += '\n';
  for (const SweepPoint& p : sr.points) {
    if (sr.axis == SweepAxis::Snr) {
      out += real(p.snr_db);
    } else {
      out += real(p.alpha) + ',' + real(p.gamma);
    }
    out += ',' + real(p.oeb) + ',' + real(10.0 * std::log10(p.oeb)) + ',' + real(p.rmse_ls) + ',' +
           real(p.rmse_ml) + ',' + std::to_string(p.trials_ok) + ',' +
           std::to_string(p.trials_failed) + '\n';
  }
  return out;
}

void write_results(const SweepResult& sr, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  out << format_results(sr);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path);
}

SweepResult parse_results(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "results CSV is empty");
  SweepResult sr;
  if (line == kSnrHeader) {
    sr.axis = SweepAxis::Snr;
  } else if (line == kGridHeader) {
    sr.axis = SweepAxis::Orientation;
  } else {
    throw Error(ErrorKind::Parse, "unrecognised results header: " + line);
  }
  const std::size_t width = sr.axis == SweepAxis::Snr ? 7 : 8;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != width) throw Error(ErrorKind::Parse, "wrong column count: " + line);
    SweepPoint p;
    std::size_t c = 0;
    if (sr.axis == SweepAxis::Snr) {
      p.snr_db = parse_real(cells[c++]);
    } else {
      p.alpha = parse_real(cells[c++]);
      p.gamma = parse_real(cells[c++]);
    }
    p.oeb = parse_real(cells[c++]);
    ++c;  // oeb_db is derived
    p.rmse_ls = parse_real(cells[c++]);
    p.rmse_ml = parse_real(cells[c++]);
    p.trials_ok = parse_int(cells[c++]);
    p.trials_failed = parse_int(cells[c++]);
    sr.trials = std::max(sr.trials, p.trials_ok + p.trials_failed);
    sr.points.push_back(p);
  }
  return sr;
}

SweepResult read_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_results(buf.str());
}

}  // namespace orient3d
