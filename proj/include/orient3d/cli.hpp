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

#include <iosfwd>
#include <string>
#include <vector>

#include "orient3d/estimators.hpp"
#include "orient3d/scenario.hpp"

namespace orient3d::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct ParsedMeasurements {
  MeasurementSet set;
  bool has_kappas = false;
};

// CSV with header bs_index,el_rad,az_rad[,kappa_el,kappa_az]; bs_index is
// 1-based into the scenario's base-station list. Throws Error(Parse) on
// malformed or out-of-range values.
ParsedMeasurements parse_measurements(const std::string& text, const Scenario& sc);

// Entry point; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orient3d::cli
