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

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace asqlab {

enum class ModelId {
  Rabi,
  T1,
  Ramsey,
  Echo,
  CP,
  CPScaling,
  RabiNoise,
  Boltzmann,
  Line,
  DoubleGaussian,
};

std::string to_string(ModelId id);
/// Accepts the lower-case names used on the command line ("rabi", "t1",
/// "ramsey", "echo", "cp", "cp-scaling", "rabi-noise", "boltzmann", "line",
/// "double-gaussian").
ModelId parse_model(const std::string& name);

/// The nine models of the fit catalogue, in declaration order.
const std::vector<ModelId>& catalogue();

struct Bound {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v >= lower && v <= upper; }
};

/// A model function together with its parameter layout, bounds and the
/// policy producing starting points from data.
struct FitModel {
  using Evaluate = std::function<void(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                                      Eigen::VectorXd& y, Eigen::MatrixXd* jacobian)>;
  using InitialGuess =
      std::function<std::vector<Eigen::VectorXd>(const Eigen::VectorXd& x, const Eigen::VectorXd& y)>;
  using Canonicalize = std::function<void(Eigen::VectorXd& p)>;

  ModelId id = ModelId::Line;
  std::vector<std::string> names;
  std::vector<Bound> bounds;
  Evaluate evaluate;
  InitialGuess initial_guess;
  Canonicalize canonicalize;  // optional; maps an optimum onto its canonical twin

  Eigen::Index parameter_count() const { return static_cast<Eigen::Index>(names.size()); }
  Eigen::Index index_of(const std::string& name) const;
  Eigen::VectorXd operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& p) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& p) const;
};

FitModel make_model(ModelId id);

struct FitOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-10;
  std::optional<Eigen::VectorXd> initial;  // overrides the model's guess policy
};

struct FitResult {
  ModelId model = ModelId::Line;
  std::vector<std::string> names;
  Eigen::VectorXd values;
  Eigen::VectorXd sigmas;  // one-sigma
  Eigen::MatrixXd covariance;
  double rss = 0.0;  // weighted residual sum of squares
  double gradient_norm = 0.0;
  bool converged = false;
  bool degenerate = false;  // rank-deficient Jacobian at the optimum
  int iterations = 0;
  std::vector<double> cost_history;  // rss after every accepted step

  double value(const std::string& name) const;
  double sigma(const std::string& name) const;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) least squares, projected onto
/// the model bounds.
///
/// Every starting point from the model's guess policy is refined and the
/// lowest-cost result is kept. A run stops once the projected gradient
/// norm drops below gradient_tolerance * (1 + rss) or after max_iterations.
/// With `weights` (1 / sigma^2 per point) the covariance is absolute,
/// otherwise it is scaled by rss / (n - p).
///
/// Throws std::invalid_argument when the sizes disagree, there are fewer
/// points than parameters, or x holds non-finite values.
FitResult fit(const FitModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
              const std::optional<Eigen::VectorXd>& weights = std::nullopt,
              const FitOptions& options = {});

inline FitResult fit(ModelId id, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                     const std::optional<Eigen::VectorXd>& weights = std::nullopt,
                     const FitOptions& options = {}) {
  return fit(make_model(id), x, y, weights, options);
}

/// Angular frequency of the largest peak of the (non-uniform) periodogram
/// of y - mean(y), searched on a grid four times finer than 2 pi / span.
double dominant_angular_frequency(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace asqlab
