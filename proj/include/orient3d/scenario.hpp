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

#include <filesystem>
#include <string>
#include <vector>

#include "orient3d/geometry.hpp"

namespace orient3d {

enum class IndexOrigin { Centered, Corner };

// Uniform planar array in the local XY plane. Element (i, j) sits at
// spacing * (x_i, y_j) wavelengths.
struct Upa {
  int nx = 16;
  int ny = 16;
  double spacing = 0.5;  // in carrier wavelengths
  IndexOrigin origin = IndexOrigin::Centered;

  int size() const { return nx * ny; }
};

struct Scenario {
  std::vector<Vec3> bs_positions;
  Vec3 ue_position = Vec3::Zero();
  EulerAngles true_orientation;
  Upa upa;
  std::vector<double> snr_db;  // one entry per base station
  double carrier_ghz = 28.0;

  std::size_t bs_count() const { return bs_positions.size(); }

  // Copy with every link set to the same SNR.
  Scenario with_snr(double db) const;

  // Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

// Two base stations at [0,0,0] and [0,50,0], receiver at [50,0,-5], 16x16
// half-wavelength array, orientation (0.6 pi, 0, -0.8 pi).
Scenario default_scenario(double snr_db = -10.0);

// default_scenario() plus a third base station at [50,50,0].
Scenario default_scenario_three_bs(double snr_db = -10.0);

double db_to_linear(double db);

// JSON schema (units in field names):
//   {
//     "bs_positions_m": [[x, y, z], ...],
//     "ue_position_m": [x, y, z],
//     "orientation_rad": {"alpha": a, "beta": b, "gamma": c},
//     "upa": {"nx": 16, "ny": 16, "spacing_wavelengths": 0.5},
//     "snr_db": -10 | [per-BS values],
//     "carrier_ghz": 28
//   }
// "orientation_rad", "upa", "snr_db" and "carrier_ghz" are optional.
Scenario scenario_from_json_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json_text(const Scenario& sc);

}  // namespace orient3d
