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

#include "orient3d/error.hpp"

namespace orient3d {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DegenerateGeometry: return "degenerate geometry";
    case ErrorKind::SingularGradient: return "singular gradient";
    case ErrorKind::NonPositiveInformation: return "non-positive information";
    case ErrorKind::ConcentrationOverflow: return "concentration overflow";
    case ErrorKind::SingularFim: return "singular fisher information";
    case ErrorKind::NotTangent: return "not in tangent space";
    case ErrorKind::Underdetermined: return "underdetermined";
    case ErrorKind::DegenerateSubset: return "degenerate subset";
    case ErrorKind::Unobservable: return "orientation unobservable";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Parse: return "parse error";
  }
  return "unknown";
}

}  // namespace orient3d
