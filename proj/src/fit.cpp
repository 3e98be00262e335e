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

#include "asqlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "asqlab/circuit.hpp"

namespace asqlab {

Eigen::Index FitModel::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<Eigen::Index>(i);
  }
  throw std::out_of_range("FitModel: no parameter named '" + name + "'");
}

Eigen::VectorXd FitModel::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& p) const {
  Eigen::VectorXd y(x.size());
  evaluate(x, p, y, nullptr);
  return y;
}

Eigen::MatrixXd FitModel::jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& p) const {
  Eigen::VectorXd y(x.size());
  Eigen::MatrixXd jac(x.size(), parameter_count());
  evaluate(x, p, y, &jac);
  return jac;
}

double FitResult::value(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[static_cast<Eigen::Index>(i)];
  }
  throw std::out_of_range("FitResult: no parameter named '" + name + "'");
}

double FitResult::sigma(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return sigmas[static_cast<Eigen::Index>(i)];
  }
  throw std::out_of_range("FitResult: no parameter named '" + name + "'");
}

namespace {

struct Run {
  Eigen::VectorXd p;
  double rss = std::numeric_limits<double>::infinity();
  double gradient_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;
};

void project(const FitModel& model, Eigen::VectorXd& p) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Bound& b = model.bounds[static_cast<std::size_t>(i)];
    p[i] = std::clamp(p[i], b.lower, b.upper);
  }
}

// Gradient components that would push a parameter through an active bound do
// not count towards stationarity.
Eigen::VectorXd projected(const FitModel& model, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& g) {
  Eigen::VectorXd out = g;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Bound& b = model.bounds[static_cast<std::size_t>(i)];
    if ((p[i] <= b.lower && g[i] < 0.0) || (p[i] >= b.upper && g[i] > 0.0)) out[i] = 0.0;
  }
  return out;
}

double weighted_rss(const Eigen::VectorXd& r, const Eigen::VectorXd& w) {
  return (r.array().square() * w.array()).sum();
}

// Largest relative undamped step at which a stalled run still counts as converged.
constexpr double kStallStep = 1e-8;

Run refine(const FitModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
           const Eigen::VectorXd& w, Eigen::VectorXd p, const FitOptions& options) {
  const Eigen::Index np = model.parameter_count();
  const Eigen::Index n = x.size();
  Run run;
  project(model, p);

  Eigen::VectorXd f(n), r(n);
  Eigen::MatrixXd jac(n, np);
  model.evaluate(x, p, f, &jac);
  r = y - f;
  double cost = weighted_rss(r, w);
  if (!std::isfinite(cost)) {
    run.p = p;
    return run;
  }

  double lambda = 1e-3;
  int it = 0;
  Eigen::VectorXd grad;
  for (;;) {
    const Eigen::MatrixXd jw = w.asDiagonal() * jac;
    const Eigen::MatrixXd a = jac.transpose() * jw;
    const Eigen::VectorXd raw = jw.transpose() * r;
    grad = projected(model, p, raw);
    const double gnorm = grad.norm();
    run.gradient_norm = gnorm;
    if (gnorm < options.gradient_tolerance * (1.0 + cost)) {
      run.converged = true;
      break;
    }
    if (it >= options.max_iterations) break;

    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < np; ++i) {
      const bool blocked = grad[i] == 0.0 && raw[i] != 0.0;
      if (!blocked && a(i, i) > 0.0) free.push_back(i);
    }
    const Eigen::Index nf = static_cast<Eigen::Index>(free.size());
    if (nf == 0) break;

    bool accepted = false;
    while (!accepted && lambda < 1e20) {
      Eigen::MatrixXd m(nf, nf);
      Eigen::VectorXd rhs(nf);
      for (Eigen::Index i = 0; i < nf; ++i) {
        rhs[i] = grad[free[static_cast<std::size_t>(i)]];
        for (Eigen::Index j = 0; j < nf; ++j) {
          m(i, j) = a(free[static_cast<std::size_t>(i)], free[static_cast<std::size_t>(j)]);
        }
        const double d = std::max(m(i, i), 1e-12);
        m(i, i) += lambda * d;
      }
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
      Eigen::VectorXd step = ldlt.solve(rhs);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      Eigen::VectorXd trial = p;
      for (Eigen::Index i = 0; i < nf; ++i) trial[free[static_cast<std::size_t>(i)]] += step[i];
      project(model, trial);
      Eigen::VectorXd ft(n);
      Eigen::MatrixXd jt(n, np);
      model.evaluate(x, trial, ft, &jt);
      const Eigen::VectorXd rt = y - ft;
      const double ct = weighted_rss(rt, w);
      if (std::isfinite(ct) && ct < cost) {
        p = trial;
        f = ft;
        jac = jt;
        r = rt;
        cost = ct;
        run.history.push_back(cost);
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 10.0;
      }
    }
    ++it;
    if (!accepted) {
      // No damped step lowers the cost. Count the run as converged when the
      // undamped step is already below working precision.
      Eigen::MatrixXd m(nf, nf);
      Eigen::VectorXd rhs(nf);
      for (Eigen::Index i = 0; i < nf; ++i) {
        rhs[i] = grad[free[static_cast<std::size_t>(i)]];
        for (Eigen::Index j = 0; j < nf; ++j) {
          m(i, j) = a(free[static_cast<std::size_t>(i)], free[static_cast<std::size_t>(j)]);
        }
      }
      const Eigen::VectorXd step = m.completeOrthogonalDecomposition().solve(rhs);
      double rel = 0.0;
      for (Eigen::Index i = 0; i < nf; ++i) {
        const double v = std::abs(p[free[static_cast<std::size_t>(i)]]);
        rel = std::max(rel, std::abs(step[i]) / std::max(v, 1e-300));
      }
      run.converged = step.allFinite() && rel < kStallStep;
      break;
    }
  }
  run.p = p;
  run.rss = cost;
  run.iterations = it;
  return run;
}

}  // namespace

FitResult fit(const FitModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
              const std::optional<Eigen::VectorXd>& weights, const FitOptions& options) {
  const Eigen::Index np = model.parameter_count();
  if (x.size() != y.size()) throw std::invalid_argument("fit: x and y differ in length");
  if (x.size() < np) throw std::invalid_argument("fit: fewer points than parameters");
  if (!x.allFinite()) throw std::invalid_argument("fit: x holds non-finite values");
  if (!y.allFinite()) throw std::invalid_argument("fit: y holds non-finite values");
  if (model.bounds.size() != model.names.size()) {
    throw std::invalid_argument("fit: bounds and parameter names differ in length");
  }
  Eigen::VectorXd w = Eigen::VectorXd::Ones(x.size());
  if (weights) {
    if (weights->size() != x.size()) throw std::invalid_argument("fit: weights differ in length");
    if (!weights->allFinite() || (weights->array() <= 0.0).any()) {
      throw std::invalid_argument("fit: weights must be positive and finite");
    }
    w = *weights;
  }

  std::vector<Eigen::VectorXd> starts;
  if (options.initial) {
    if (options.initial->size() != np) throw std::invalid_argument("fit: initial guess size");
    starts.push_back(*options.initial);
  } else {
    starts = model.initial_guess(x, y);
  }
  if (starts.empty()) throw std::runtime_error("fit: model produced no starting point");

  Run best;
  for (const Eigen::VectorXd& start : starts) {
    Run run = refine(model, x, y, w, start, options);
    if (run.p.size() == 0) continue;
    const bool better = best.p.size() == 0 || run.rss < best.rss;
    if (better) best = std::move(run);
  }
  if (best.p.size() == 0) throw std::runtime_error("fit: model is not finite at any start");

  if (model.canonicalize) model.canonicalize(best.p);

  FitResult out;
  out.model = model.id;
  out.names = model.names;
  out.values = best.p;
  out.rss = best.rss;
  out.gradient_norm = best.gradient_norm;
  out.converged = best.converged;
  out.iterations = best.iterations;
  out.cost_history = std::move(best.history);

  const Eigen::MatrixXd jac = model.jacobian(x, best.p);
  const Eigen::MatrixXd a = jac.transpose() * w.asDiagonal() * jac;
  Eigen::VectorXd scale(np);
  for (Eigen::Index i = 0; i < np; ++i) {
    if (a(i, i) > 0.0 && std::isfinite(a(i, i))) {
      scale[i] = 1.0 / std::sqrt(a(i, i));
    } else {
      scale[i] = 1.0;
      out.degenerate = true;
    }
  }
  const Eigen::MatrixXd as = scale.asDiagonal() * a * scale.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(as);
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(np);
  for (Eigen::Index i = 0; i < np; ++i) {
    if (ev[i] > 1e-10 * top && top > 0.0) {
      inv[i] = 1.0 / ev[i];
    } else {
      out.degenerate = true;
    }
  }
  Eigen::MatrixXd cov = scale.asDiagonal() * (eig.eigenvectors() * inv.asDiagonal() *
                                              eig.eigenvectors().transpose()) *
                        scale.asDiagonal();
  if (!weights) {
    const Eigen::Index dof = std::max<Eigen::Index>(x.size() - np, 1);
    cov *= best.rss / static_cast<double>(dof);
  }
  out.covariance = cov;
  out.sigmas = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return out;
}

double dominant_angular_frequency(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("dominant_angular_frequency: need at least 3 matching points");
  }
  const double span = x.maxCoeff() - x.minCoeff();
  if (!(span > 0.0)) throw std::invalid_argument("dominant_angular_frequency: zero span");
  std::vector<double> sorted(x.data(), x.data() + x.size());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] > sorted[i - 1]) gaps.push_back(sorted[i] - sorted[i - 1]);
  }
  std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2),
                   gaps.end());
  const double step = gaps[gaps.size() / 2];
  const double nyquist = kPi / step;
  const double resolution = kTwoPi / span / 4.0;
  const Eigen::VectorXd z = y.array() - y.mean();

  double best_omega = resolution;
  double best_power = -1.0;
  for (int k = 1;; ++k) {
    const double omega = resolution * k;
    if (omega > nyquist) break;
    std::complex<double> s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += z[i] * std::polar(1.0, -omega * x[i]);
    const double power = std::norm(s);
    if (power > best_power) {
      best_power = power;
      best_omega = omega;
    }
  }
  return best_omega;
}

}  // namespace asqlab
