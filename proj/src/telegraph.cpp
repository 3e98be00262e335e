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

#include "asqlab/telegraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace asqlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSqrtTwoPi = 2.5066282746310002;

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}
}  // namespace

void TelegraphSpec::validate() const {
  if (!(dwell_s > 0.0) || !(dwell_d > 0.0)) {
    throw std::invalid_argument("telegraph: dwell times must be positive");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("telegraph: dt must be positive");
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("telegraph: duration must be non-negative");
  }
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("telegraph: noise_sigma must be >= 0");
  if (!std::isfinite(level_s) || !std::isfinite(level_d)) {
    throw std::invalid_argument("telegraph: levels must be finite");
  }
}

std::optional<std::string> TelegraphSpec::warning() const {
  if (dt > std::min(dwell_s, dwell_d) / 5.0) {
    return "dt exceeds a fifth of the shorter dwell; dwells will be under-resolved";
  }
  return std::nullopt;
}

std::size_t TelegraphSpec::sample_count() const {
  return static_cast<std::size_t>(std::llround(duration * 1e6 / dt));
}

TelegraphTrace simulate_telegraph(const TelegraphSpec& spec) {
  spec.validate();
  TelegraphTrace trace;
  trace.dt = spec.dt;
  const std::size_t n = spec.sample_count();
  trace.samples.resize(n);
  if (n == 0) return trace;

  std::mt19937_64 rng(spec.rng_seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::exponential_distribution<double> leave_s(1.0 / spec.dwell_s);
  std::exponential_distribution<double> leave_d(1.0 / spec.dwell_d);
  std::normal_distribution<double> noise(0.0, 1.0);

  const double p_d = spec.dwell_d / (spec.dwell_s + spec.dwell_d);
  bool in_d = uniform(rng) < p_d;
  double remaining = in_d ? leave_d(rng) : leave_s(rng);
  double time_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fill = spec.dt;
    double occ_d = 0.0;
    while (fill > 0.0) {
      const double take = std::min(remaining, fill);
      if (in_d) occ_d += take;
      remaining -= take;
      fill -= take;
      if (remaining <= 0.0) {
        in_d = !in_d;
        remaining = in_d ? leave_d(rng) : leave_s(rng);
      }
    }
    time_d += occ_d;
    const double share = occ_d / spec.dt;
    trace.samples[i] = share * spec.level_d + (1.0 - share) * spec.level_s;
    if (spec.noise_sigma > 0.0) trace.samples[i] += spec.noise_sigma * noise(rng);
  }
  trace.doublet_fraction = time_d / (spec.dt * static_cast<double>(n));
  return trace;
}

DwellTimes dwell_times(const TelegraphTrace& trace, const DwellOptions& options) {
  if (!(trace.dt > 0.0)) throw std::invalid_argument("dwell_times: dt must be positive");
  DwellTimes out;
  out.t_s = out.t_d = out.sigma_s = out.sigma_d = kNaN;
  out.low_confidence = true;

  std::vector<double> below, above;
  for (double v : trace.samples) (v > options.threshold ? above : below).push_back(v);
  if (below.empty() || above.empty()) return out;
  const double high = median(std::move(above));
  const double low = median(std::move(below));
  const double band = options.hysteresis * (high - low);

  struct Run {
    bool high;
    std::size_t length;
  };
  std::vector<Run> runs;
  bool state = trace.samples.front() > options.threshold;
  for (double v : trace.samples) {
    if (state && v < options.threshold - band) state = false;
    else if (!state && v > options.threshold + band) state = true;
    if (runs.empty() || runs.back().high != state) runs.push_back({state, 0});
    ++runs.back().length;
  }

  std::vector<Run> merged;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].length == 1 && !merged.empty() && i + 1 < runs.size()) {
      merged.back().length += 1 + runs[i + 1].length;
      ++i;
      continue;
    }
    merged.push_back(runs[i]);
  }

  out.transitions = merged.empty() ? 0 : merged.size() - 1;
  out.low_confidence = out.transitions < kMinTransitions;
  if (merged.size() < 3) return out;

  double sum_s = 0.0, sum_d = 0.0;
  for (std::size_t i = 1; i + 1 < merged.size(); ++i) {
    const bool singlet = merged[i].high == options.singlet_high;
    const double t = static_cast<double>(merged[i].length) * trace.dt;
    if (singlet) {
      sum_s += t;
      ++out.runs_s;
    } else {
      sum_d += t;
      ++out.runs_d;
    }
  }
  const double m_s = out.runs_s ? sum_s / static_cast<double>(out.runs_s) : kNaN;
  const double m_d = out.runs_d ? sum_d / static_cast<double>(out.runs_d) : kNaN;

  const double tau = options.dead_time_samples * trace.dt;
  double t_s = std::max(m_s - tau, trace.dt);
  double t_d = std::max(m_d - tau, trace.dt);
  if (tau > 0.0 && std::isfinite(m_s) && std::isfinite(m_d)) {
    for (int it = 0; it < 100; ++it) {
      const double ns = std::max(m_s - tau, 0.0) * std::exp(-tau / t_d);
      const double nd = std::max(m_d - tau, 0.0) * std::exp(-tau / t_s);
      const bool done = std::abs(ns - t_s) <= 1e-12 * t_s && std::abs(nd - t_d) <= 1e-12 * t_d;
      t_s = std::max(ns, 1e-12);
      t_d = std::max(nd, 1e-12);
      if (done) break;
    }
  }
  out.t_s = out.runs_s ? t_s : kNaN;
  out.t_d = out.runs_d ? t_d : kNaN;
  out.sigma_s = out.t_s / std::sqrt(static_cast<double>(std::max<std::size_t>(out.runs_s, 1)));
  out.sigma_d = out.t_d / std::sqrt(static_cast<double>(std::max<std::size_t>(out.runs_d, 1)));
  return out;
}

std::vector<HistogramBin> histogram(const std::vector<double>& samples, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram: need at least one bin");
  if (samples.empty()) throw std::invalid_argument("histogram: no samples");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) out[b].center = lo + width * (static_cast<double>(b) + 0.5);
  for (double v : samples) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    out[b].count += 1.0;
  }
  return out;
}

DoubleGaussian double_gaussian_fit(const std::vector<HistogramBin>& hist) {
  std::size_t nonzero = 0;
  for (const HistogramBin& b : hist) nonzero += b.count > 0.0 ? 1 : 0;
  if (nonzero < 6) throw std::invalid_argument("double_gaussian_fit: need six non-empty bins");
  Eigen::VectorXd x(static_cast<Eigen::Index>(hist.size()));
  Eigen::VectorXd y(x.size());
  for (std::size_t i = 0; i < hist.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = hist[i].center;
    y[static_cast<Eigen::Index>(i)] = hist[i].count;
  }
  DoubleGaussian out;
  out.fit = fit(ModelId::DoubleGaussian, x, y);
  const Eigen::VectorXd& p = out.fit.values;
  out.amp1 = p[0];
  out.mean1 = p[1];
  out.sigma1 = p[2];
  out.amp2 = p[3];
  out.mean2 = p[4];
  out.sigma2 = p[5];
  const double area1 = out.amp1 * out.sigma1 * kSqrtTwoPi;
  const double area2 = out.amp2 * out.sigma2 * kSqrtTwoPi;
  const double total = area1 + area2;
  out.population1 = total > 0.0 ? area1 / total : kNaN;
  out.population2 = total > 0.0 ? area2 / total : kNaN;
  const double separation = std::abs(out.mean2 - out.mean1);
  out.merged = separation < 0.5 * std::max(out.sigma1, out.sigma2) ||
               !(std::min(out.population1, out.population2) > 1e-4);
  return out;
}

double Fidelity::project(std::complex<double> z) const {
  const std::complex<double> d = z - origin;
  return d.real() * axis.real() + d.imag() * axis.imag();
}

double Fidelity::at(const ShotSet& ground, const ShotSet& excited, const Fidelity& geometry,
                    double threshold) {
  std::size_t false_up = 0, false_down = 0;
  for (auto z : ground.shots) false_up += geometry.project(z) > threshold ? 1 : 0;
  for (auto z : excited.shots) false_down += geometry.project(z) > threshold ? 0 : 1;
  const double p_up = static_cast<double>(false_up) / static_cast<double>(ground.shots.size());
  const double p_down = static_cast<double>(false_down) / static_cast<double>(excited.shots.size());
  return 1.0 - 0.5 * (p_up + p_down);
}

Fidelity assignment_fidelity(const ShotSet& ground, const ShotSet& excited) {
  if (ground.shots.empty() || excited.shots.empty()) {
    throw std::invalid_argument("assignment_fidelity: empty shot set");
  }
  auto mean = [](const ShotSet& s) {
    std::complex<double> m = 0.0;
    for (auto z : s.shots) m += z;
    return m / static_cast<double>(s.shots.size());
  };
  Fidelity out;
  out.origin = mean(ground);
  const std::complex<double> delta = mean(excited) - out.origin;
  if (std::abs(delta) == 0.0) {
    out.identical = true;
    return out;
  }
  out.axis = delta / std::abs(delta);

  // Sweep the cut upwards through the pooled, sorted projections.
  struct Shot {
    double s;
    bool excited;
  };
  std::vector<Shot> all;
  all.reserve(ground.shots.size() + excited.shots.size());
  for (auto z : ground.shots) all.push_back({out.project(z), false});
  for (auto z : excited.shots) all.push_back({out.project(z), true});
  std::sort(all.begin(), all.end(), [](const Shot& a, const Shot& b) { return a.s < b.s; });

  const double ng = static_cast<double>(ground.shots.size());
  const double ne = static_cast<double>(excited.shots.size());
  std::size_t ground_below = 0, excited_below = 0;
  double best_f = 1.0 - 0.5 * (1.0 + 0.0);  // cut below every shot
  double best_cut = all.front().s - 1.0;
  std::size_t best_g = 0, best_e = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    (all[i].excited ? excited_below : ground_below) += 1;
    if (i + 1 < all.size() && all[i + 1].s == all[i].s) continue;
    const double p_up = (ng - static_cast<double>(ground_below)) / ng;
    const double p_down = static_cast<double>(excited_below) / ne;
    const double f = 1.0 - 0.5 * (p_up + p_down);
    if (f > best_f) {
      best_f = f;
      best_cut = i + 1 < all.size() ? 0.5 * (all[i].s + all[i + 1].s) : all[i].s + 1.0;
      best_g = ground_below;
      best_e = excited_below;
    }
  }
  out.f = best_f;
  out.threshold = best_cut;
  out.p_up_given_down = (ng - static_cast<double>(best_g)) / ng;
  out.p_down_given_up = static_cast<double>(best_e) / ne;
  return out;
}

}  // namespace asqlab
