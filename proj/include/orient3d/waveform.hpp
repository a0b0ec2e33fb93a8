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

// Array response of the receiver's uniform planar array, the waveform-level
// Fisher information of one arrival direction, and the calibration that
// turns per-link SNR into von Mises concentrations.

#include <Eigen/Core>

#include <span>

#include "orient3d/geometry.hpp"
#include "orient3d/scenario.hpp"
#include "orient3d/vonmises.hpp"

namespace orient3d {

// Composite per-link SNR |alpha|^2 T N_tx P / N0 (linear).
struct LinkBudget {
  double snr_linear = 0.0;
};

// Element (i, j) is stored at index i + nx * j.
Eigen::VectorXcd steering_vector(const Upa& upa, const AoaPair& aoa);

// Columns: d a / d el, d a / d az.
Eigen::MatrixX2cd steering_derivatives(const Upa& upa, const AoaPair& aoa);

// Fisher information of (el, az) from y = gain * a(theta) + noise with the
// complex gain unknown: 2 SNR Re{D^H (I - a a^H / ||a||^2) D}.
Eigen::Matrix2d aoa_fim_waveform(const Upa& upa, const AoaPair& aoa, const LinkBudget& link);

// For every link: invert the 2x2 waveform FIM, keep the diagonal of the
// inverse as the per-angle variance, and pick the concentration whose von
// Mises Fisher information equals the reciprocal. Throws SingularFim when a
// link's 2x2 FIM cannot be inverted.
ConcentrationVector calibrate_concentrations(const Upa& upa, std::span<const AoaPair> aoas,
                                             std::span<const double> snr_linear);

// Uses the scenario's true orientation.
ConcentrationVector calibrate_concentrations(const Scenario& sc);

// Same, at an explicit orientation (used by orientation sweeps).
ConcentrationVector calibrate_concentrations(const Scenario& sc, const Rotation& r);

}  // namespace orient3d
