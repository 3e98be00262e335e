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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asqlab/circuit.hpp"
#include "asqlab/spectrum.hpp"

namespace asqlab {

enum class SweepAxis { Flux, Field };

std::string to_string(SweepAxis axis);

struct SweepPoint {
  double phi_ext = 0.0;  // radians
  double b_mT = 0.0;
  Eigen::VectorXd energies;        // GHz, ascending
  std::vector<StateLabel> labels;  // per-point labels, aligned with energies
  std::vector<int> branch;         // tracked branch id of each state
  TransitionSet transitions;       // from t0_down, plus the swap from t0_up
  double min_confidence = 1.0;
  bool ambiguous = false;
};

/// Sweep of the joint spectrum along flux or field. Branch identities are
/// carried between neighbouring points by maximal eigenvector overlap, so a
/// branch follows the adiabatic state through avoided crossings and the
/// diabatic one through exact crossings.
struct SweepResult {
  SweepAxis axis = SweepAxis::Flux;
  std::vector<double> axis_values;
  std::vector<SweepPoint> points;
  std::vector<std::string> branch_names;  // named after the first-point label

  std::optional<int> branch_id(const std::string& name) const;
  /// E_branch - E_ground at every point; NaN where the branch left the window.
  Eigen::VectorXd branch_frequency(int id) const;
};

struct SweepOptions {
  BasisSpec basis{};
  Eigen::Index levels = 10;
  unsigned jobs = 1;
};

SweepResult sweep_flux(const CircuitParams& params_template, std::span<const double> phi_grid,
                       double field_mT, double g_factor, double theta,
                       const SweepOptions& options = {});

SweepResult sweep_field(const CircuitParams& params_template, std::span<const double> b_grid_mT,
                        double g_factor, double theta, double phi_ext,
                        const SweepOptions& options = {});

/// Uniform grid of `points` values over [start, stop].
std::vector<double> linspace(double start, double stop, std::size_t points);

struct CrossingReport {
  bool found = false;
  double location = 0.0;   // axis units
  double splitting = 0.0;  // GHz, 2J
  std::size_t index = 0;   // grid index of the discrete minimum
  std::string branch_a;
  std::string branch_b;
};

// Largest |f_a - f_b| still reported as a crossing.
inline constexpr double kCrossingWindowGHz = 0.5;

/// Minimum of |f_a - f_b| along the sweep, refined by a parabola through
/// the squared splitting at the three grid points around the discrete
/// minimum. Returns found = false when the branches never come closer than
/// `window`.
CrossingReport find_avoided_crossing(const SweepResult& sweep, const std::string& branch_a,
                                     const std::string& branch_b,
                                     double window = kCrossingWindowGHz);

/// Every interior local minimum of |f_a - f_b| below `window`, refined as above.
std::vector<CrossingReport> find_avoided_crossings(const SweepResult& sweep,
                                                   const std::string& branch_a,
                                                   const std::string& branch_b,
                                                   double window = kCrossingWindowGHz);

struct GFactorFit {
  double g = 0.0;
  double sigma_g = 0.0;
  double intercept = 0.0;  // GHz
  double sigma_intercept = 0.0;
};

/// Weighted linear regression of f_s (GHz) against B (mT). With `sigma`
/// the uncertainties are absolute; without, they are scaled by the residual
/// variance.
GFactorFit fit_gfactor(std::span<const double> b_mT, std::span<const double> f_GHz,
                       std::span<const double> sigma = {});

}  // namespace asqlab
