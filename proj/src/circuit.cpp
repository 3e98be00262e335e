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

#include "asqlab/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace asqlab {

double reduce_phase(double phi) {
  if (!std::isfinite(phi)) throw std::invalid_argument("phase is not finite");
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double ZeemanField::parallel() const { return magnitude * std::cos(theta); }
double ZeemanField::perpendicular() const { return magnitude * std::sin(theta); }

ZeemanField zeeman_from_field(double b_field_mT, double g_factor, double theta) {
  if (!std::isfinite(b_field_mT) || !std::isfinite(g_factor) || !std::isfinite(theta))
    throw std::invalid_argument("zeeman_from_field: non-finite argument");
  if (b_field_mT < 0.0) throw std::invalid_argument("zeeman_from_field: negative field");
  const double magnitude = std::abs(g_factor) * kBohrMagnetonGHzPerTesla * b_field_mT * 1e-3;
  return ZeemanField{magnitude, theta};
}

CircuitParams::CircuitParams(double e_c_, double e_j_, double e_0_, double e_so_,
                             ZeemanField zeeman_, double phi_ext)
    : e_c(e_c_), e_j(e_j_), e_0(e_0_), e_so(e_so_), zeeman(zeeman_),
      phi_ext_(reduce_phase(phi_ext)) {}

namespace {
void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("CircuitParams: ") + what);
}
}  // namespace

void CircuitParams::validate() const {
  require(std::isfinite(e_c) && std::isfinite(e_j) && std::isfinite(e_0) &&
              std::isfinite(e_so) && std::isfinite(zeeman.magnitude) &&
              std::isfinite(zeeman.theta),
          "non-finite parameter");
  require(e_c > 0.0, "e_c must be positive");
  require(e_j >= 0.0, "e_j must be non-negative");
  require(e_0 >= 0.0, "e_0 must be non-negative");
  require(e_so >= 0.0, "e_so must be non-negative");
  require(zeeman.magnitude >= 0.0, "zeeman magnitude must be non-negative");
  require(zeeman.theta >= 0.0 && zeeman.theta <= kPi, "zeeman theta must lie in [0, pi]");
}

namespace presets {
CircuitParams main_text() { return CircuitParams(0.284, 13.1, 0.211, 0.305, {}, 0.0); }
CircuitParams coupling_estimate() { return CircuitParams(0.284, 13.1, 0.211, 0.309, {}, 0.0); }
}  // namespace presets

void validate(const BasisSpec& basis) {
  if (basis.n_charge < 1) throw std::invalid_argument("BasisSpec: n_charge must be >= 1");
  if (basis.n_charge > (kMaxDimension / 2 - 1) / 2)
    throw std::length_error("BasisSpec: dimension " + std::to_string(basis.dimension()) +
                            " exceeds the configured ceiling of " +
                            std::to_string(kMaxDimension));
}

}  // namespace asqlab
