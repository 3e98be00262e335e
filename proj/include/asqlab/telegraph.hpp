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

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asqlab/fit.hpp"

namespace asqlab {

/// Two-state switching process: state "s" (singlet) and "d" (doublet).
struct TelegraphSpec {
  double dwell_s = 59.0;    // us, mean singlet dwell
  double dwell_d = 2800.0;  // us, mean doublet dwell
  double level_s = 1.0;
  double level_d = 0.0;
  double noise_sigma = 0.1;
  double dt = 4.3;        // us
  double duration = 1.0;  // s
  std::uint64_t rng_seed = 1;

  /// Throws std::invalid_argument for non-positive dwells or dt, negative
  /// duration or noise.
  void validate() const;
  /// Set when dt exceeds a fifth of the shorter dwell.
  std::optional<std::string> warning() const;
  std::size_t sample_count() const;
};

struct TelegraphTrace {
  std::vector<double> samples;
  double dt = 1.0;                 // us
  double doublet_fraction = 0.0;   // exact time share of "d", simulated traces only

  double time(std::size_t i) const { return dt * static_cast<double>(i); }
};

/// Continuous-time Markov chain with exponential dwells, started from the
/// stationary distribution. Each sample is the time-weighted mean level
/// over its bin plus Gaussian noise. The random stream depends only on the
/// seed.
TelegraphTrace simulate_telegraph(const TelegraphSpec& spec);

struct DwellOptions {
  double threshold = 0.0;
  bool singlet_high = true;  // "s" lies above the threshold
  // Schmitt-trigger half width as a fraction of the level separation.
  double hysteresis = 1.0 / 6.0;
  // Dwells shorter than this many samples are invisible to the detector.
  double dead_time_samples = 1.5;
};

struct DwellTimes {
  double t_s = 0.0;  // us
  double t_d = 0.0;  // us
  double sigma_s = 0.0;
  double sigma_d = 0.0;
  std::size_t runs_s = 0;
  std::size_t runs_d = 0;
  std::size_t transitions = 0;
  bool low_confidence = false;  // fewer than five transitions
};

// Fewer transitions than this flag a dwell estimate.
inline constexpr std::size_t kMinTransitions = 5;

/// Mean dwell times of a thresholded trace.
///
/// The two levels are the medians of the samples on either side of the
/// threshold. A Schmitt trigger of width +- hysteresis * separation turns
/// the trace into runs, single-sample runs are merged into their
/// neighbours and the first and last runs, being censored, are dropped.
/// Mean run lengths are corrected for the dwells hidden by the
/// `dead_time_samples` detector dead time (a dwell shorter than tau joins
/// its neighbours), solving m = tau + T exp(tau / T_other) for both states.
DwellTimes dwell_times(const TelegraphTrace& trace, const DwellOptions& options);

struct HistogramBin {
  double center = 0.0;
  double count = 0.0;
};

/// `bins` equal-width bins over [min, max] of the samples.
std::vector<HistogramBin> histogram(const std::vector<double>& samples, std::size_t bins);

struct DoubleGaussian {
  double mean1 = 0.0, sigma1 = 0.0, amp1 = 0.0;
  double mean2 = 0.0, sigma2 = 0.0, amp2 = 0.0;  // mean2 >= mean1
  double population1 = 0.0, population2 = 0.0;   // normalized areas
  bool merged = false;  // peaks not resolved
  FitResult fit;
};

/// Six-parameter Gaussian pair fit to a histogram. Needs six bins with
/// nonzero counts. Flags `merged` when the means are closer than half the
/// larger sigma or one area is negligible.
DoubleGaussian double_gaussian_fit(const std::vector<HistogramBin>& hist);

struct ShotSet {
  std::vector<std::complex<double>> shots;  // (I, Q)
  double integration_ns = 0.0;
};

struct Fidelity {
  double f = 0.5;
  double threshold = 0.0;           // along the axis, measured from the ground mean
  double p_down_given_up = 0.5;     // excited shots read as ground
  double p_up_given_down = 0.5;     // ground shots read as excited
  std::complex<double> origin{};    // ground mean
  std::complex<double> axis{1.0};   // unit vector towards the excited mean
  bool identical = false;

  /// Projection of a shot onto the discrimination axis.
  double project(std::complex<double> z) const;
  /// F at an arbitrary threshold for the given sets.
  static double at(const ShotSet& ground, const ShotSet& excited, const Fidelity& geometry,
                   double threshold);
};

/// Projects both sets onto the line through their means and picks the
/// threshold maximizing F = 1 - (P(down|up) + P(up|down)) / 2 over every
/// cut between projected shots. Throws on empty sets.
Fidelity assignment_fidelity(const ShotSet& ground, const ShotSet& excited);

}  // namespace asqlab
