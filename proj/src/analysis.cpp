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

#include "asqlab/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "asqlab/models.hpp"

namespace asqlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double beta_from_gamma(double gamma) {
  if (!(gamma < 1.0)) return kNaN;
  return gamma / (1.0 - gamma);
}

CPScaling cp_scaling_exponent(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("cp_scaling_exponent: need two or more pairs");
  Eigen::VectorXd lx(static_cast<Eigen::Index>(pairs.size()));
  Eigen::VectorXd ly(lx.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [n, t2] = pairs[i];
    if (!(n >= 1.0)) throw std::invalid_argument("cp_scaling_exponent: n_pi must be >= 1");
    if (!(t2 > 0.0)) throw std::invalid_argument("cp_scaling_exponent: T2 must be positive");
    lx[static_cast<Eigen::Index>(i)] = std::log(n);
    ly[static_cast<Eigen::Index>(i)] = std::log(t2);
  }
  if (lx.maxCoeff() == lx.minCoeff()) {
    throw std::invalid_argument("cp_scaling_exponent: n_pi values are all equal");
  }
  const FitResult r = fit(ModelId::Line, lx, ly);
  CPScaling out;
  out.gamma = r.value("slope");
  out.sigma_gamma = r.sigma("slope");
  out.amplitude = std::exp(r.value("intercept"));
  out.beta = beta_from_gamma(out.gamma);
  out.beta_defined = std::isfinite(out.beta);
  return out;
}

RabiNoise rabi_noise_extract(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("rabi_noise_extract: need three or more points");
  Eigen::VectorXd f(static_cast<Eigen::Index>(pairs.size()));
  Eigen::VectorXd rate2(f.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [fr, tr] = pairs[i];
    if (!(fr > 0.0)) throw std::invalid_argument("rabi_noise_extract: f_R must be positive");
    if (!(tr > 0.0)) throw std::invalid_argument("rabi_noise_extract: T_R must be positive");
    const double rate = 1e3 / tr;  // MHz
    f[static_cast<Eigen::Index>(i)] = fr;
    rate2[static_cast<Eigen::Index>(i)] = rate * rate;
  }
  const FitResult r = fit(ModelId::RabiNoise, f, rate2);
  RabiNoise out;
  out.sigma_f = r.value("sigma_f");
  out.c = r.value("c");
  out.sigma_sigma_f = r.sigma("sigma_f");
  out.sigma_c = r.sigma("c");
  out.converged = r.converged;
  out.degenerate = r.degenerate;
  return out;
}

namespace {

// The two rate contributions in MHz; the squared rate is their sum of squares.
double frequency_noise_rate(double f_rabi_MHz, double sigma_f_MHz) {
  return sigma_f_MHz * sigma_f_MHz / (2.0 * f_rabi_MHz);
}

double drive_noise_rate(double f_rabi_MHz, double c) { return c * f_rabi_MHz; }

}  // namespace

double rabi_decay_frequency_noise_limit(double f_rabi_MHz, double sigma_f_MHz) {
  return 1e3 / frequency_noise_rate(f_rabi_MHz, sigma_f_MHz);
}

double rabi_decay_drive_noise_limit(double f_rabi_MHz, double c) {
  return 1e3 / drive_noise_rate(f_rabi_MHz, c);
}

double rabi_decay_time(double f_rabi_MHz, double sigma_f_MHz, double c) {
  return 1e3 / std::hypot(frequency_noise_rate(f_rabi_MHz, sigma_f_MHz),
                          drive_noise_rate(f_rabi_MHz, std::abs(c)));
}

double susceptibility_bound(double sigma_f_MHz, double susceptibility_GHz) {
  if (!(susceptibility_GHz > 0.0)) {
    throw std::invalid_argument("susceptibility_bound: susceptibility must be positive");
  }
  return sigma_f_MHz * 1e-3 / susceptibility_GHz;
}

BoltzmannFit boltzmann_temperature(std::span<const std::pair<double, double>> points) {
  if (points.empty()) throw std::invalid_argument("boltzmann_temperature: no points");
  constexpr double k = models::kBoltzmannExponentMilliKelvinPerGHz;
  BoltzmannFit out;
  bool all_unity = true;
  Eigen::VectorXd f(static_cast<Eigen::Index>(points.size()));
  Eigen::VectorXd ratio(f.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [fs, r] = points[i];
    if (!(fs > 0.0)) throw std::invalid_argument("boltzmann_temperature: f_s must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("boltzmann_temperature: ratio must be positive");
    if (r > 1.0) out.flag = BoltzmannFlag::Inversion;
    if (r != 1.0) all_unity = false;
    f[static_cast<Eigen::Index>(i)] = fs;
    ratio[static_cast<Eigen::Index>(i)] = r;
  }
  if (out.flag == BoltzmannFlag::Inversion) {
    out.t_eff_mK = kNaN;
    out.sigma_mK = kNaN;
    return out;
  }
  if (all_unity) {
    out.flag = BoltzmannFlag::Infinite;
    out.t_eff_mK = std::numeric_limits<double>::infinity();
    return out;
  }
  if (points.size() == 1) {
    out.t_eff_mK = k * f[0] / std::log(1.0 / ratio[0]);
    return out;
  }
  const FitResult r = fit(ModelId::Boltzmann, f, ratio);
  out.t_eff_mK = r.value("t_eff_mK");
  out.sigma_mK = r.sigma("t_eff_mK");
  return out;
}

}  // namespace asqlab
