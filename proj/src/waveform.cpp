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

#include "orient3d/waveform.hpp"

#include <Eigen/LU>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "orient3d/error.hpp"

namespace orient3d {

namespace {

double element_coordinate(int index, int count, IndexOrigin origin) {
  return origin == IndexOrigin::Centered ? index - 0.5 * (count - 1) : static_cast<double>(index);
}

}  // namespace

Eigen::VectorXcd steering_vector(const Upa& upa, const AoaPair& aoa) {
  const double u = std::sin(aoa.el) * std::cos(aoa.az);
  const double v = std::sin(aoa.el) * std::sin(aoa.az);
  const double k = 2.0 * std::numbers::pi * upa.spacing;
  Eigen::VectorXcd a(upa.size());
  for (int j = 0; j < upa.ny; ++j) {
    const double y = element_coordinate(j, upa.ny, upa.origin);
    for (int i = 0; i < upa.nx; ++i) {
      const double x = element_coordinate(i, upa.nx, upa.origin);
      a[i + upa.nx * j] = std::polar(1.0, k * (x * u + y * v));
    }
  }
  return a;
}

Eigen::MatrixX2cd steering_derivatives(const Upa& upa, const AoaPair& aoa) {
  const double se = std::sin(aoa.el), ce = std::cos(aoa.el);
  const double sa = std::sin(aoa.az), ca = std::cos(aoa.az);
  const double u = se * ca, v = se * sa;
  const double du_del = ce * ca, dv_del = ce * sa;
  const double du_daz = -se * sa, dv_daz = se * ca;
  const double k = 2.0 * std::numbers::pi * upa.spacing;
  const std::complex<double> jk(0.0, k);

  Eigen::MatrixX2cd d(upa.size(), 2);
  for (int j = 0; j < upa.ny; ++j) {
    const double y = element_coordinate(j, upa.ny, upa.origin);
    for (int i = 0; i < upa.nx; ++i) {
      const double x = element_coordinate(i, upa.nx, upa.origin);
      const std::complex<double> a = std::polar(1.0, k * (x * u + y * v));
      d(i + upa.nx * j, 0) = jk * (x * du_del + y * dv_del) * a;
      d(i + upa.nx * j, 1) = jk * (x * du_daz + y * dv_daz) * a;
    }
  }
  return d;
}

Eigen::Matrix2d aoa_fim_waveform(const Upa& upa, const AoaPair& aoa, const LinkBudget& link) {
  const Eigen::VectorXcd a = steering_vector(upa, aoa);
  const Eigen::MatrixX2cd d = steering_derivatives(upa, aoa);
  // D^H P D with P the projector orthogonal to a.
  const Eigen::Matrix2cd gram = d.adjoint() * d;
  const Eigen::Vector2cd ad = d.adjoint() * a;
  const Eigen::Matrix2cd projected = gram - ad * ad.adjoint() / a.squaredNorm();
  Eigen::Matrix2d fim = 2.0 * link.snr_linear * projected.real();
  fim(0, 1) = fim(1, 0) = 0.5 * (fim(0, 1) + fim(1, 0));
  return fim;
}

ConcentrationVector calibrate_concentrations(const Upa& upa, std::span<const AoaPair> aoas,
                                             std::span<const double> snr_linear) {
  if (aoas.size() != snr_linear.size()) {
    throw Error(ErrorKind::InvalidArgument, "one SNR value per arrival direction required");
  }
  ConcentrationVector kappas(2 * static_cast<Eigen::Index>(aoas.size()));
  for (std::size_t m = 0; m < aoas.size(); ++m) {
    const Eigen::Matrix2d fim = aoa_fim_waveform(upa, aoas[m], LinkBudget{snr_linear[m]});
    const double det = fim.determinant();
    const double scale = fim.trace();
    const auto describe = [&] {
      return "base station " + std::to_string(m + 1) + " (el " + std::to_string(aoas[m].el) +
             ", az " + std::to_string(aoas[m].az) + ", snr " + std::to_string(snr_linear[m]) + ")";
    };
    if (!(scale > 0.0) || !(det > 1e-14 * scale * scale)) {
      throw Error(ErrorKind::SingularFim, "singular waveform FIM for " + describe());
    }
    const Eigen::Matrix2d cov = fim.inverse();
    for (int k = 0; k < 2; ++k) {
      const double target = 1.0 / cov(k, k);
      try {
        kappas[static_cast<Eigen::Index>(2 * m) + k] = solve_concentration(target);
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " for " + describe());
      }
    }
  }
  return kappas;
}

ConcentrationVector calibrate_concentrations(const Scenario& sc, const Rotation& r) {
  std::vector<AoaPair> aoas;
  std::vector<double> snr;
  aoas.reserve(sc.bs_count());
  for (std::size_t m = 0; m < sc.bs_count(); ++m) {
    aoas.push_back(aoa_from_geometry(r, sc.ue_position, sc.bs_positions[m]));
    snr.push_back(db_to_linear(sc.snr_db.at(m)));
  }
  return calibrate_concentrations(sc.upa, aoas, snr);
}

ConcentrationVector calibrate_concentrations(const Scenario& sc) {
  return calibrate_concentrations(sc, euler_to_rotation(sc.true_orientation));
}

}  // namespace orient3d
