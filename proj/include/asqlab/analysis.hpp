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

#include <span>
#include <utility>
#include <vector>

#include "asqlab/fit.hpp"

namespace asqlab {

struct CPScaling {
  double gamma = 0.0;
  double sigma_gamma = 0.0;
  double amplitude = 0.0;  // T2 at n_pi = 1, units of the input
  double beta = 0.0;       // gamma / (1 - gamma); NaN when undefined
  bool beta_defined = true;
};

/// Noise exponent of the dephasing spectrum from T2 = A n_pi^gamma.
double beta_from_gamma(double gamma);

/// Log-log regression of (n_pi, T2). Requires two or more pairs with
/// n_pi >= 1 and T2 > 0; beta_defined is false for gamma >= 1.
CPScaling cp_scaling_exponent(std::span<const std::pair<double, double>> pairs);

struct RabiNoise {
  double sigma_f = 0.0;  // MHz
  double c = 0.0;        // dimensionless
  double sigma_sigma_f = 0.0;
  double sigma_c = 0.0;
  bool converged = false;
  bool degenerate = false;
};

/// Fits (1/T_R)^2 = sigma_f^4 / (4 f_R^2) + C^2 f_R^2 to (f_R in MHz, T_R in
/// ns) pairs. Needs three or more points with f_R > 0 and T_R > 0.
RabiNoise rabi_noise_extract(std::span<const std::pair<double, double>> pairs);

/// Single-term limits of the model in ns: 2 f_R / sigma_f^2 without drive
/// noise and 1 / (C f_R) without frequency noise.
double rabi_decay_frequency_noise_limit(double f_rabi_MHz, double sigma_f_MHz);
double rabi_decay_drive_noise_limit(double f_rabi_MHz, double c);
/// Full model, T_R in ns.
double rabi_decay_time(double f_rabi_MHz, double sigma_f_MHz, double c);

/// Upper bound sigma_f / S on the fluctuation of a control parameter, for
/// sigma_f in MHz and a susceptibility S in GHz per parameter unit.
double susceptibility_bound(double sigma_f_MHz, double susceptibility_GHz);

enum class BoltzmannFlag { Ok, Infinite, Inversion };

struct BoltzmannFit {
  double t_eff_mK = 0.0;
  double sigma_mK = 0.0;
  BoltzmannFlag flag = BoltzmannFlag::Ok;
};

/// Effective temperature from (f_s in GHz, P_up / P_down) points. A single
/// point is inverted analytically. Ratios above one are flagged as
/// inversion and all ratios equal to one as an infinite temperature.
BoltzmannFit boltzmann_temperature(std::span<const std::pair<double, double>> points);

}  // namespace asqlab
