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

#pragma once

#include <Eigen/Dense>

#include "asqlab/circuit.hpp"

namespace asqlab {

/// First-order estimate of the spin-transmon coupling from expanding
/// -E_SO sin(phi - phi_ext) sigma_x to linear order in the transmon phase.
struct CouplingEstimate {
  double phi_zpf = 0.0;
  double ej_eff = 0.0;          // GHz
  double j_transverse = 0.0;    // GHz, J_xbar / 2pi
  double j_longitudinal = 0.0;  // GHz, J_zbar / 2pi
  // Zeroth-order term E_SO sin(phi_ext); it shifts the spin splitting and is
  // not part of the coupling.
  double static_spin_orbit = 0.0;  // GHz
};

/// Effective SQUID Josephson energy
/// (E_J + E_0) sqrt(cos^2 phi_ext + ((E_J - E_0)/(E_J + E_0))^2 sin^2 phi_ext).
double ej_eff(const CircuitParams& params);

/// (2 E_c / E_J,eff)^(1/4).
double phi_zpf(const CircuitParams& params);

CouplingEstimate coupling_strengths(const CircuitParams& params);

/// Columns v1 = (cos theta/2, sin theta/2), v2 = (-sin theta/2, cos theta/2).
/// In this basis sigma_x reads cos(theta) sigma_xbar + sin(theta) sigma_zbar.
template <typename Scalar = double>
Eigen::Matrix<Scalar, 2, 2> spin_rotation(Scalar theta) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(theta / Scalar(2));
  const Scalar s = sin(theta / Scalar(2));
  Eigen::Matrix<Scalar, 2, 2> u;
  u << c, -s,
       s, c;
  return u;
}

}  // namespace asqlab
