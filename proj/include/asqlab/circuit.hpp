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

#include <cstddef>

namespace asqlab {

// Bohr magneton over Planck constant, GHz per tesla.
inline constexpr double kBohrMagnetonGHzPerTesla = 13.9962;
// Planck over Boltzmann constant, kelvin per GHz.
inline constexpr double kPlanckOverBoltzmannKelvinPerGHz = 0.0479924;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduces an angle to [0, 2*pi).
double reduce_phase(double phi);

/// Zeeman energy |E_Z|/h and its angle to the spin-orbit direction.
///
/// The component along the spin-orbit direction couples through sigma_x,
/// the perpendicular one through sigma_z.
struct ZeemanField {
  double magnitude = 0.0;  // GHz
  double theta = 0.0;      // radians, [0, pi]

  double parallel() const;
  double perpendicular() const;
};

/// Zeeman field for a magnetic field `b_field_mT` and an effective g-factor.
/// Throws std::invalid_argument on negative or non-finite fields.
ZeemanField zeeman_from_field(double b_field_mT, double g_factor, double theta);

/// Circuit and spin energies of the joint ASQ-transmon system, all
/// expressed as frequencies in GHz.
class CircuitParams {
 public:
  double e_c = 0.284;
  double e_j = 13.1;
  double e_0 = 0.211;
  double e_so = 0.305;
  ZeemanField zeeman{};

  CircuitParams() = default;
  CircuitParams(double e_c, double e_j, double e_0, double e_so, ZeemanField zeeman,
                double phi_ext);

  double phi_ext() const { return phi_ext_; }
  void set_phi_ext(double phi) { phi_ext_ = reduce_phase(phi); }

  /// Throws std::invalid_argument if any energy is out of range or non-finite.
  void validate() const;

 private:
  double phi_ext_ = 0.0;
};

namespace presets {
// E_SO/h = 305 MHz.
CircuitParams main_text();
// E_SO/h = 309 MHz, the value used for the coupling estimate.
CircuitParams coupling_estimate();
}  // namespace presets

enum class Gauge { FluxOnReference, FluxOnDot };

/// Truncation of the charge basis: states -n_charge..+n_charge, each with
/// two spin components.
struct BasisSpec {
  int n_charge = 40;
  Gauge gauge = Gauge::FluxOnDot;

  std::ptrdiff_t charge_states() const { return 2 * n_charge + 1; }
  std::ptrdiff_t dimension() const { return 2 * charge_states(); }
};

// Largest Hamiltonian dimension accepted by the assembler.
inline constexpr std::ptrdiff_t kMaxDimension = 8192;

void validate(const BasisSpec& basis);

}  // namespace asqlab
