// Copyright 2026 The asqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asqlab/hamiltonian.hpp"

namespace asqlab {

FluxPlacement flux_placement(double phi_ext, Gauge gauge) {
  switch (gauge) {
    case Gauge::FluxOnReference:
      // phi -> phi + phi_ext maps this onto the dot placement at the same flux.
      return {-phi_ext, 0.0};
    case Gauge::FluxOnDot:
      break;
  }
  return {0.0, phi_ext};
}

Eigen::Matrix2cd zeeman_hamiltonian(const ZeemanField& zeeman) {
  const double par = zeeman.parallel();
  const double perp = zeeman.perpendicular();
  Eigen::Matrix2cd hz;
  hz << perp, par,
        par, -perp;
  return 0.5 * hz;
}

}  // namespace asqlab
