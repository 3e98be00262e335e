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

namespace asqlab::models {

// Time-domain models take t and the decay times in the same unit and
// angular frequencies in radians per that unit.

template <typename T>
T rabi(T t, T a, T omega, T decay, T c) {
  using std::cos;
  using std::exp;
  return a * cos(omega * t) * exp(-t / decay) + c;
}

template <typename T>
T t1(T t, T a, T decay, T c) {
  using std::exp;
  return a * exp(-t / decay) + c;
}

/// Stretched decay exp(-(t/T)^(d+1)); d = 1 is Gaussian.
template <typename T>
T ramsey(T t, T a, T omega, T phase, T decay, T d, T c) {
  using std::cos;
  using std::exp;
  using std::pow;
  return a * cos(omega * t - phase) * exp(-pow(t / decay, d + T(1))) + c;
}

template <typename T>
T echo(T t, T a, T omega, T phase, T decay, T d, T c, T e) {
  return ramsey(t, a, omega, phase, decay, d, c) + e * t;
}

template <typename T>
T cp_scaling(T n_pi, T amplitude, T gamma) {
  using std::pow;
  return amplitude * pow(n_pi, gamma);
}

/// Squared Rabi decay rate in MHz^2 for a Rabi frequency in MHz.
template <typename T>
T rabi_noise(T f_rabi, T sigma_f, T c) {
  const T s2 = sigma_f * sigma_f;
  return s2 * s2 / (T(4) * f_rabi * f_rabi) + c * c * f_rabi * f_rabi;
}

// h / k_B in mK per GHz.
inline constexpr double kBoltzmannExponentMilliKelvinPerGHz = 47.9924;

/// Population ratio P_up / P_down for a splitting in GHz at T in mK.
template <typename T>
T boltzmann(T f_GHz, T t_mK) {
  using std::exp;
  return exp(-T(kBoltzmannExponentMilliKelvinPerGHz) * f_GHz / t_mK);
}

template <typename T>
T line(T x, T slope, T intercept) {
  return slope * x + intercept;
}

template <typename T>
T gaussian(T x, T amplitude, T mean, T sigma) {
  using std::exp;
  const T u = (x - mean) / sigma;
  return amplitude * exp(-u * u / T(2));
}

template <typename T>
T double_gaussian(T x, T a1, T m1, T s1, T a2, T m2, T s2) {
  return gaussian(x, a1, m1, s1) + gaussian(x, a2, m2, s2);
}

}  // namespace asqlab::models
