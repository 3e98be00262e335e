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

#include "asqlab/perturbation.hpp"

#include <cmath>
#include <stdexcept>

namespace asqlab {

double ej_eff(const CircuitParams& params) {
  params.validate();
  const double sum = params.e_j + params.e_0;
  if (!(sum > 0.0)) throw std::invalid_argument("ej_eff: e_j + e_0 must be positive");
  const double asym = (params.e_j - params.e_0) / sum;
  const double c = std::cos(params.phi_ext());
  const double s = std::sin(params.phi_ext());
  return sum * std::sqrt(c * c + asym * asym * s * s);
}

double phi_zpf(const CircuitParams& params) {
  const double ej = ej_eff(params);
  if (!(ej > 0.0)) throw std::invalid_argument("phi_zpf: effective Josephson energy vanishes");
  return std::pow(2.0 * params.e_c / ej, 0.25);
}

CouplingEstimate coupling_strengths(const CircuitParams& params) {
  CouplingEstimate out;
  out.ej_eff = ej_eff(params);
  out.phi_zpf = std::pow(2.0 * params.e_c / out.ej_eff, 0.25);
  const double amplitude = params.e_so * std::cos(params.phi_ext()) * out.phi_zpf;
  out.j_transverse = amplitude * std::cos(params.zeeman.theta);
  out.j_longitudinal = amplitude * std::sin(params.zeeman.theta);
  out.static_spin_orbit = params.e_so * std::sin(params.phi_ext());
  return out;
}

}  // namespace asqlab
