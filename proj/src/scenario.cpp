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

#include "orient3d/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "orient3d/error.hpp"

namespace orient3d {

namespace {

using nlohmann::json;

Vec3 vec3_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorKind::Parse, std::string(field) + ": expected an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

Scenario Scenario::with_snr(double db) const {
  Scenario sc = *this;
  sc.snr_db.assign(bs_positions.size(), db);
  return sc;
}

void Scenario::validate() const {
  if (bs_positions.empty()) {
    throw Error(ErrorKind::InvalidArgument, "scenario needs at least one base station");
  }
  if (snr_db.size() != bs_positions.size()) {
    throw Error(ErrorKind::InvalidArgument, "scenario needs one SNR value per base station");
  }
  if (!ue_position.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "receiver position must be finite");
  }
  for (std::size_t m = 0; m < bs_positions.size(); ++m) {
    if (!bs_positions[m].allFinite()) {
      throw Error(ErrorKind::InvalidArgument,
                  "base station " + std::to_string(m + 1) + " position must be finite");
    }
    if ((bs_positions[m] - ue_position).norm() == 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "base station " + std::to_string(m + 1) + " coincides with the receiver");
    }
    if (!std::isfinite(snr_db[m])) {
      throw Error(ErrorKind::InvalidArgument, "SNR values must be finite");
    }
  }
  if (upa.nx < 1 || upa.ny < 1 || !(upa.spacing > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "array needs nx, ny >= 1 and positive spacing");
  }
  const auto& o = true_orientation;
  if (!std::isfinite(o.alpha) || !std::isfinite(o.beta) || !std::isfinite(o.gamma)) {
    throw Error(ErrorKind::InvalidArgument, "orientation angles must be finite");
  }
}

Scenario default_scenario(double snr_db) {
  Scenario sc;
  sc.bs_positions = {Vec3(0, 0, 0), Vec3(0, 50, 0)};
  sc.ue_position = Vec3(50, 0, -5);
  sc.true_orientation = {0.6 * std::numbers::pi, 0.0, -0.8 * std::numbers::pi};
  sc.snr_db.assign(2, snr_db);
  return sc;
}

Scenario default_scenario_three_bs(double snr_db) {
  Scenario sc = default_scenario(snr_db);
  sc.bs_positions.emplace_back(50, 50, 0);
  sc.snr_db.assign(3, snr_db);
  return sc;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Scenario scenario_from_json_text(const std::string& text) {
  Scenario sc;
  try {
    const json j = json::parse(text);
    if (!j.contains("bs_positions_m") || !j.contains("ue_position_m")) {
      throw Error(ErrorKind::Parse, "scenario requires bs_positions_m and ue_position_m");
    }
    for (const auto& p : j.at("bs_positions_m")) {
      sc.bs_positions.push_back(vec3_from_json(p, "bs_positions_m"));
    }
    sc.ue_position = vec3_from_json(j.at("ue_position_m"), "ue_position_m");
    if (j.contains("orientation_rad")) {
      const auto& o = j.at("orientation_rad");
      sc.true_orientation = {o.value("alpha", 0.0), o.value("beta", 0.0), o.value("gamma", 0.0)};
    }
    if (j.contains("upa")) {
      const auto& u = j.at("upa");
      sc.upa.nx = u.value("nx", 16);
      sc.upa.ny = u.value("ny", 16);
      sc.upa.spacing = u.value("spacing_wavelengths", 0.5);
    }
    if (j.contains("snr_db")) {
      const auto& s = j.at("snr_db");
      if (s.is_array()) {
        sc.snr_db = s.get<std::vector<double>>();
      } else {
        sc.snr_db.assign(sc.bs_positions.size(), s.get<double>());
      }
    } else {
      sc.snr_db.assign(sc.bs_positions.size(), -10.0);
    }
    sc.carrier_ghz = j.value("carrier_ghz", 28.0);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("scenario JSON: ") + e.what());
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open scenario file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

std::string scenario_to_json_text(const Scenario& sc) {
  json j;
  j["bs_positions_m"] = json::array();
  for (const auto& p : sc.bs_positions) j["bs_positions_m"].push_back(vec3_to_json(p));
  j["ue_position_m"] = vec3_to_json(sc.ue_position);
  j["orientation_rad"] = {{"alpha", sc.true_orientation.alpha},
                          {"beta", sc.true_orientation.beta},
                          {"gamma", sc.true_orientation.gamma}};
  j["upa"] = {{"nx", sc.upa.nx}, {"ny", sc.upa.ny}, {"spacing_wavelengths", sc.upa.spacing}};
  j["snr_db"] = sc.snr_db;
  j["carrier_ghz"] = sc.carrier_ghz;
  return j.dump(2);
}

}  // namespace orient3d
