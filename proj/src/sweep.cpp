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

#include "asqlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "asqlab/fit.hpp"

namespace asqlab {

std::string to_string(SweepAxis axis) { return axis == SweepAxis::Flux ? "phi_ext" : "b_mT"; }

std::optional<int> SweepResult::branch_id(const std::string& name) const {
  for (std::size_t i = 0; i < branch_names.size(); ++i) {
    if (branch_names[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

Eigen::VectorXd SweepResult::branch_frequency(int id) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) {
    const SweepPoint& pt = points[j];
    double f = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < pt.branch.size(); ++i) {
      if (pt.branch[i] == id) {
        f = pt.energies[static_cast<Eigen::Index>(i)] - pt.energies[0];
        break;
      }
    }
    out[static_cast<Eigen::Index>(j)] = f;
  }
  return out;
}

std::vector<double> linspace(double start, double stop, std::size_t points) {
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

namespace {

// Overlaps below this start a new branch instead of continuing one.
constexpr double kTrackingOverlap = 0.5;

void check_axis(std::span<const double> axis) {
  if (axis.size() < 2) throw std::invalid_argument("sweep: axis needs at least two points");
  for (double v : axis) {
    if (!std::isfinite(v)) throw std::invalid_argument("sweep: axis holds non-finite values");
  }
  const bool up = axis[1] > axis[0];
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (up ? !(axis[i] > axis[i - 1]) : !(axis[i] < axis[i - 1])) {
      throw std::invalid_argument("sweep: axis must be strictly monotonic");
    }
  }
}

template <typename Point>
std::vector<EigenSolution> evaluate_points(std::size_t count, unsigned jobs, Point&& point) {
  std::vector<EigenSolution> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = point(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep point " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

TransitionSet point_transitions(const EigenSolution& sol) {
  TransitionSet set;
  const LabelKey ground{0, Spin::Down};
  if (sol.find(ground)) set = transitions(sol, ground);
  const LabelKey up{0, Spin::Up};
  if (sol.find(up)) {
    for (const Transition& t : transitions(sol, up).entries) {
      if (t.kind == TransitionKind::Swap) set.entries.push_back(t);
    }
  }
  return set;
}

SweepResult assemble(SweepAxis axis, std::span<const double> values,
                     const std::vector<EigenSolution>& sols, double fixed) {
  SweepResult res;
  res.axis = axis;
  res.axis_values.assign(values.begin(), values.end());
  res.points.resize(sols.size());

  for (std::size_t j = 0; j < sols.size(); ++j) {
    const EigenSolution& sol = sols[j];
    SweepPoint& pt = res.points[j];
    pt.phi_ext = axis == SweepAxis::Flux ? values[j] : fixed;
    pt.b_mT = axis == SweepAxis::Field ? values[j] : fixed;
    pt.energies = sol.energies;
    pt.labels = sol.labels;
    pt.transitions = point_transitions(sol);
    for (const StateLabel& l : sol.labels) {
      pt.min_confidence = std::min(pt.min_confidence, l.confidence);
      pt.ambiguous = pt.ambiguous || l.ambiguous();
    }
    const std::size_t k = static_cast<std::size_t>(sol.size());
    pt.branch.assign(k, -1);
    auto new_branch = [&](std::size_t i) {
      std::string name = to_string(sol.labels[i].key);
      if (j > 0) name += "@" + std::to_string(j);
      pt.branch[i] = static_cast<int>(res.branch_names.size());
      res.branch_names.push_back(name);
    };
    if (j == 0) {
      for (std::size_t i = 0; i < k; ++i) new_branch(i);
      continue;
    }
    const EigenSolution& prev = sols[j - 1];
    const Eigen::MatrixXd overlap = (prev.states.adjoint() * sol.states).cwiseAbs2();
    struct Pair {
      double w;
      Eigen::Index a, b;
    };
    std::vector<Pair> pairs;
    for (Eigen::Index a = 0; a < overlap.rows(); ++a) {
      for (Eigen::Index b = 0; b < overlap.cols(); ++b) pairs.push_back({overlap(a, b), a, b});
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) { return l.w > r.w; });
    std::vector<bool> used_prev(static_cast<std::size_t>(overlap.rows()), false);
    for (const Pair& p : pairs) {
      if (p.w < kTrackingOverlap) break;
      const auto a = static_cast<std::size_t>(p.a);
      const auto b = static_cast<std::size_t>(p.b);
      if (used_prev[a] || pt.branch[b] >= 0) continue;
      used_prev[a] = true;
      pt.branch[b] = res.points[j - 1].branch[a];
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (pt.branch[i] < 0) new_branch(i);
    }
  }
  return res;
}

}  // namespace

SweepResult sweep_flux(const CircuitParams& params_template, std::span<const double> phi_grid,
                       double field_mT, double g_factor, double theta, const SweepOptions& options) {
  check_axis(phi_grid);
  const ZeemanField zeeman = zeeman_from_field(field_mT, g_factor, theta);
  auto point = [&](std::size_t i) {
    CircuitParams p = params_template;
    p.zeeman = zeeman;
    p.set_phi_ext(phi_grid[i]);
    return label_states(solve(p, options.basis, options.levels), p);
  };
  const auto sols = evaluate_points(phi_grid.size(), options.jobs, point);
  SweepResult res = assemble(SweepAxis::Flux, phi_grid, sols, field_mT);
  return res;
}

SweepResult sweep_field(const CircuitParams& params_template, std::span<const double> b_grid_mT,
                        double g_factor, double theta, double phi_ext, const SweepOptions& options) {
  check_axis(b_grid_mT);
  for (double b : b_grid_mT) {
    if (b < 0.0) throw std::invalid_argument("sweep_field: negative field");
  }
  auto point = [&](std::size_t i) {
    CircuitParams p = params_template;
    p.zeeman = zeeman_from_field(b_grid_mT[i], g_factor, theta);
    p.set_phi_ext(phi_ext);
    return label_states(solve(p, options.basis, options.levels), p);
  };
  const auto sols = evaluate_points(b_grid_mT.size(), options.jobs, point);
  return assemble(SweepAxis::Field, b_grid_mT, sols, phi_ext);
}

namespace {

struct Splitting {
  std::vector<double> x;
  std::vector<double> d;
};

Splitting splitting_of(const SweepResult& sweep, const std::string& a, const std::string& b) {
  const auto ia = sweep.branch_id(a);
  const auto ib = sweep.branch_id(b);
  if (!ia) throw std::invalid_argument("find_avoided_crossing: unknown branch '" + a + "'");
  if (!ib) throw std::invalid_argument("find_avoided_crossing: unknown branch '" + b + "'");
  const Eigen::VectorXd fa = sweep.branch_frequency(*ia);
  const Eigen::VectorXd fb = sweep.branch_frequency(*ib);
  Splitting s;
  s.x = sweep.axis_values;
  s.d.resize(s.x.size());
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    s.d[i] = std::abs(fa[static_cast<Eigen::Index>(i)] - fb[static_cast<Eigen::Index>(i)]);
  }
  return s;
}

CrossingReport refine(const Splitting& s, std::size_t i, const std::string& a,
                      const std::string& b) {
  CrossingReport r;
  r.found = true;
  r.index = i;
  r.location = s.x[i];
  r.splitting = s.d[i];
  r.branch_a = a;
  r.branch_b = b;
  if (i == 0 || i + 1 >= s.x.size()) return r;
  if (!std::isfinite(s.d[i - 1]) || !std::isfinite(s.d[i + 1])) return r;
  // A hyperbolic anticrossing has a squared splitting exactly quadratic in
  // the detuning, so the parabola goes through d^2.
  const double x0 = s.x[i - 1], x1 = s.x[i], x2 = s.x[i + 1];
  const double y0 = s.d[i - 1] * s.d[i - 1], y1 = s.d[i] * s.d[i], y2 = s.d[i + 1] * s.d[i + 1];
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  if (!(curv > 0.0)) return r;
  const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
  const double lo = std::min(x0, x2), hi = std::max(x0, x2);
  if (!(xv >= lo && xv <= hi)) return r;
  const double yv = y1 + d01 * (xv - x1) + curv * (xv - x0) * (xv - x1);
  r.location = xv;
  r.splitting = std::sqrt(std::max(yv, 0.0));
  return r;
}

}  // namespace

CrossingReport find_avoided_crossing(const SweepResult& sweep, const std::string& branch_a,
                                     const std::string& branch_b, double window) {
  const Splitting s = splitting_of(sweep, branch_a, branch_b);
  std::size_t best = s.d.size();
  for (std::size_t i = 0; i < s.d.size(); ++i) {
    if (!std::isfinite(s.d[i])) continue;
    if (best == s.d.size() || s.d[i] < s.d[best]) best = i;
  }
  CrossingReport none;
  none.branch_a = branch_a;
  none.branch_b = branch_b;
  if (best == s.d.size() || s.d[best] > window) return none;
  return refine(s, best, branch_a, branch_b);
}

std::vector<CrossingReport> find_avoided_crossings(const SweepResult& sweep,
                                                   const std::string& branch_a,
                                                   const std::string& branch_b, double window) {
  const Splitting s = splitting_of(sweep, branch_a, branch_b);
  std::vector<CrossingReport> out;
  for (std::size_t i = 1; i + 1 < s.d.size(); ++i) {
    if (!std::isfinite(s.d[i]) || s.d[i] > window) continue;
    const bool left = !std::isfinite(s.d[i - 1]) || s.d[i] < s.d[i - 1];
    const bool right = !std::isfinite(s.d[i + 1]) || s.d[i] <= s.d[i + 1];
    if (left && right) out.push_back(refine(s, i, branch_a, branch_b));
  }
  return out;
}

GFactorFit fit_gfactor(std::span<const double> b_mT, std::span<const double> f_GHz,
                       std::span<const double> sigma) {
  if (b_mT.size() != f_GHz.size()) throw std::invalid_argument("fit_gfactor: size mismatch");
  if (!sigma.empty() && sigma.size() != b_mT.size()) {
    throw std::invalid_argument("fit_gfactor: sigma size mismatch");
  }
  if (b_mT.size() < 2) throw std::invalid_argument("fit_gfactor: need two or more points");
  const auto [lo, hi] = std::minmax_element(b_mT.begin(), b_mT.end());
  if (!(*hi > *lo)) throw std::invalid_argument("fit_gfactor: degenerate field axis");

  const Eigen::Index n = static_cast<Eigen::Index>(b_mT.size());
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(b_mT.data(), n);
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(f_GHz.data(), n);
  std::optional<Eigen::VectorXd> w;
  if (!sigma.empty()) {
    w = Eigen::Map<const Eigen::VectorXd>(sigma.data(), n).array().square().inverse().matrix();
  }
  const FitResult r = fit(ModelId::Line, x, y, w);
  // GHz per mT to GHz per tesla.
  const double per_tesla = 1e3 / kBohrMagnetonGHzPerTesla;
  GFactorFit out;
  out.g = r.value("slope") * per_tesla;
  out.sigma_g = r.sigma("slope") * per_tesla;
  out.intercept = r.value("intercept");
  out.sigma_intercept = r.sigma("intercept");
  return out;
}

}  // namespace asqlab
