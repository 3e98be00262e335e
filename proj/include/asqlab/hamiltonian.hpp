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

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "asqlab/circuit.hpp"

namespace asqlab {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using HermitianMatrix = ComplexMatrix<double>;

/// Flux offsets carried by the reference junction and by the dot junction.
struct FluxPlacement {
  double reference = 0.0;
  double dot = 0.0;
};

FluxPlacement flux_placement(double phi_ext, Gauge gauge);

/// H_Z = (E_perp sigma_z + E_par sigma_x) / 2.
Eigen::Matrix2cd zeeman_hamiltonian(const ZeemanField& zeeman);

/// Spinless transmon part on the charge basis:
/// 4 E_c n^2 - E_J cos(phi - a_ref) - E_0 cos(phi - a_dot).
template <typename Scalar = double>
ComplexMatrix<Scalar> build_transmon_hamiltonian(const CircuitParams& params,
                                                 const BasisSpec& basis) {
  using C = std::complex<Scalar>;
  params.validate();
  validate(basis);
  const auto flux = flux_placement(params.phi_ext(), basis.gauge);
  const Eigen::Index dim = basis.charge_states();
  const Eigen::Index ncut = basis.n_charge;
  ComplexMatrix<Scalar> h = ComplexMatrix<Scalar>::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Scalar n = static_cast<Scalar>(i - ncut);
    h(i, i) = C(Scalar(4) * Scalar(params.e_c) * n * n, 0);
  }
  // <n+1| cos(phi - a) |n> = exp(-i a) / 2.
  const C lower = -Scalar(params.e_j) / Scalar(2) * std::polar(Scalar(1), -Scalar(flux.reference)) -
                  Scalar(params.e_0) / Scalar(2) * std::polar(Scalar(1), -Scalar(flux.dot));
  for (Eigen::Index i = 0; i + 1 < dim; ++i) {
    h(i + 1, i) = lower;
    h(i, i + 1) = std::conj(lower);
  }
  return h;
}

/// Joint ASQ-transmon Hamiltonian on the charge basis with spin, ordered
/// as index = 2 * (n + n_charge) + spin:
///
///   4 E_c n^2 - E_J cos(phi - a_ref) - E_0 cos(phi - a_dot)
///     - E_SO sin(phi - a_dot) sigma_x + H_Z
///
/// FluxOnDot places the external flux on the dot junction (a_dot = phi_ext),
/// FluxOnReference puts -phi_ext on the reference junction. The two are
/// related by the charge-basis phase shift exp(i n phi_ext).
template <typename Scalar = double>
ComplexMatrix<Scalar> build_joint_hamiltonian(const CircuitParams& params,
                                              const BasisSpec& basis) {
  using C = std::complex<Scalar>;
  const ComplexMatrix<Scalar> transmon = build_transmon_hamiltonian<Scalar>(params, basis);
  const auto flux = flux_placement(params.phi_ext(), basis.gauge);
  const Eigen::Index nq = basis.charge_states();
  const Eigen::Matrix<C, 2, 2> hz = zeeman_hamiltonian(params.zeeman).cast<C>();

  ComplexMatrix<Scalar> h = ComplexMatrix<Scalar>::Zero(2 * nq, 2 * nq);
  for (Eigen::Index i = 0; i < nq; ++i) {
    for (Eigen::Index j = std::max<Eigen::Index>(0, i - 1); j <= std::min(nq - 1, i + 1); ++j) {
      h(2 * i, 2 * j) = transmon(i, j);
      h(2 * i + 1, 2 * j + 1) = transmon(i, j);
    }
    h.template block<2, 2>(2 * i, 2 * i) += hz;
  }
  // <n+1| sin(phi - a) |n> = exp(-i a) / (2 i); sigma_x flips the spin index.
  const C lower = -Scalar(params.e_so) * std::polar(Scalar(1), -Scalar(flux.dot)) / C(0, 2);
  for (Eigen::Index i = 0; i + 1 < nq; ++i) {
    for (int s = 0; s < 2; ++s) {
      h(2 * (i + 1) + (1 - s), 2 * i + s) = lower;
      h(2 * i + s, 2 * (i + 1) + (1 - s)) = std::conj(lower);
    }
  }
  return h;
}

}  // namespace asqlab
