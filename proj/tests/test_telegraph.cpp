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

#include <cmath>
#include <random>

#include "gtest/gtest.h"

#include "asqlab/telegraph.hpp"

using namespace asqlab;

namespace {

ShotSet cluster(std::size_t n, std::size_t flipped, std::complex<double> home,
                std::complex<double> away, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  ShotSet s;
  s.integration_ns = 400.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> c = i < flipped ? away : home;
    s.shots.push_back(c + std::complex<double>(g(rng), g(rng)));
  }
  return s;
}

std::vector<double> square_wave(std::size_t period, std::size_t cycles) {
  std::vector<double> out;
  for (std::size_t c = 0; c < cycles; ++c) {
    for (std::size_t i = 0; i < period; ++i) out.push_back(i < period / 2 ? 1.0 : 0.0);
  }
  return out;
}

}  // namespace

TEST(telegraph, spec_validation_and_warning) {
  TelegraphSpec s;
  EXPECT_NO_THROW(s.validate());
  EXPECT_FALSE(s.warning().has_value());
  EXPECT_EQ(s.sample_count(), static_cast<std::size_t>(1e6 / 4.3));
  s.dt = 20.0;
  EXPECT_TRUE(s.warning().has_value());
  s.dt = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = TelegraphSpec{};
  s.dwell_s = -1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = TelegraphSpec{};
  s.noise_sigma = -0.1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(telegraph, empty_trace) {
  TelegraphSpec s;
  s.duration = 0.0;
  const TelegraphTrace t = simulate_telegraph(s);
  EXPECT_TRUE(t.samples.empty());
  const DwellTimes d = dwell_times(t, {0.5});
  EXPECT_TRUE(d.low_confidence);
  EXPECT_EQ(d.transitions, 0u);
}

TEST(telegraph, seed_determines_trace) {
  TelegraphSpec s;
  s.duration = 0.05;
  const TelegraphTrace a = simulate_telegraph(s);
  const TelegraphTrace b = simulate_telegraph(s);
  EXPECT_EQ(a.samples, b.samples);
  s.rng_seed = 2;
  EXPECT_NE(simulate_telegraph(s).samples, a.samples);
}

TEST(telegraph, symmetric_chain_occupancy) {
  TelegraphSpec s;
  s.dwell_s = 100.0;
  s.dwell_d = 100.0;
  s.duration = 2.0;
  const TelegraphTrace t = simulate_telegraph(s);
  EXPECT_NEAR(t.doublet_fraction, 0.5, 0.02);
}

TEST(telegraph, doublet_occupancy) {
  TelegraphSpec s;
  s.duration = 17.0;
  const TelegraphTrace t = simulate_telegraph(s);
  EXPECT_NEAR(t.doublet_fraction, 2800.0 / 2859.0, 0.003);
}

TEST(telegraph, stationary_start) {
  // Averaged over seeds, the first bin already sits at the stationary share.
  for (double duration : {0.001, 0.01, 0.1}) {
    double sum = 0.0;
    const int seeds = 400;
    for (int seed = 0; seed < seeds; ++seed) {
      TelegraphSpec s;
      s.duration = duration;
      s.noise_sigma = 0.0;
      s.rng_seed = static_cast<std::uint64_t>(seed);
      sum += simulate_telegraph(s).doublet_fraction;
    }
    EXPECT_NEAR(sum / seeds, 2800.0 / 2859.0, 0.03) << duration;
  }
}

TEST(telegraph, dwell_round_trip) {
  TelegraphSpec s;
  s.duration = 17.0;
  const TelegraphTrace t = simulate_telegraph(s);
  const DwellTimes d = dwell_times(t, {0.5});
  EXPECT_FALSE(d.low_confidence);
  EXPECT_NEAR(d.t_s / 59.0, 1.0, 0.1);
  EXPECT_NEAR(d.t_d / 2800.0, 1.0, 0.1);
  EXPECT_GT(d.sigma_s, 0.0);
  EXPECT_GT(d.runs_s, 1000u);
}

TEST(telegraph, inverted_levels) {
  TelegraphSpec s;
  s.duration = 5.0;
  s.level_s = 0.0;
  s.level_d = 1.0;
  const TelegraphTrace t = simulate_telegraph(s);
  DwellOptions o{0.5};
  o.singlet_high = false;
  const DwellTimes d = dwell_times(t, o);
  EXPECT_NEAR(d.t_s / 59.0, 1.0, 0.15);
  EXPECT_NEAR(d.t_d / 2800.0, 1.0, 0.15);
}

TEST(telegraph, constant_trace_flagged) {
  TelegraphTrace t;
  t.dt = 4.3;
  t.samples.assign(1000, 0.2);
  const DwellTimes d = dwell_times(t, {0.5});
  EXPECT_TRUE(d.low_confidence);
  EXPECT_EQ(d.transitions, 0u);
}

TEST(telegraph, symmetric_square_wave) {
  TelegraphTrace t;
  t.dt = 1.0;
  t.samples = square_wave(40, 50);
  DwellOptions o{0.5};
  o.dead_time_samples = 0.0;
  const DwellTimes d = dwell_times(t, o);
  EXPECT_NEAR(d.t_s, 20.0, 1e-12);
  EXPECT_NEAR(d.t_d, 20.0, 1e-12);
  EXPECT_EQ(d.runs_s, 49u);
  EXPECT_EQ(d.runs_d, 49u);
  EXPECT_FALSE(d.low_confidence);
}

TEST(telegraph, histogram_counts) {
  const std::vector<double> v{0.0, 0.1, 0.2, 0.9, 1.0};
  const auto h = histogram(v, 2);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].count + h[1].count, 5.0);
  EXPECT_EQ(h[0].count, 3.0);
  EXPECT_THROW(histogram({}, 4), std::invalid_argument);
  EXPECT_THROW(histogram(v, 0), std::invalid_argument);
}

TEST(telegraph, double_gaussian_populations) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 0.1);
  std::vector<double> v;
  for (int i = 0; i < 30000; ++i) v.push_back(g(rng) + (i < 9000 ? 1.0 : 0.0));
  const DoubleGaussian dg = double_gaussian_fit(histogram(v, 200));
  EXPECT_FALSE(dg.merged);
  EXPECT_LE(dg.mean1, dg.mean2);
  EXPECT_NEAR(dg.mean1, 0.0, 0.01);
  EXPECT_NEAR(dg.mean2, 1.0, 0.01);
  EXPECT_NEAR(dg.population2, 0.3, 0.01);
  EXPECT_NEAR(dg.population1 + dg.population2, 1.0, 1e-12);
}

TEST(telegraph, double_gaussian_merged) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 0.1);
  std::vector<double> v;
  for (int i = 0; i < 20000; ++i) v.push_back(g(rng));
  EXPECT_TRUE(double_gaussian_fit(histogram(v, 100)).merged);
  std::vector<HistogramBin> sparse(10);
  sparse[3].count = 1.0;
  EXPECT_THROW(double_gaussian_fit(sparse), std::invalid_argument);
}

TEST(telegraph, double_gaussian_on_trace) {
  TelegraphSpec s;
  s.duration = 17.0;
  const TelegraphTrace t = simulate_telegraph(s);
  const DoubleGaussian dg = double_gaussian_fit(histogram(t.samples, 200));
  EXPECT_FALSE(dg.merged);
  const double minority = 59.0 / 2859.0;
  EXPECT_NEAR(dg.population2 / minority, 1.0, 0.2);
}

TEST(telegraph, fidelity_perfect) {
  const ShotSet g = cluster(500, 0, {0.0, 0.0}, {}, 0.05, 1);
  const ShotSet e = cluster(500, 0, {1.0, 1.0}, {}, 0.05, 2);
  const Fidelity f = assignment_fidelity(g, e);
  EXPECT_DOUBLE_EQ(f.f, 1.0);
  EXPECT_FALSE(f.identical);
  EXPECT_NEAR(std::abs(f.axis), 1.0, 1e-12);
}

TEST(telegraph, fidelity_identical_sets) {
  const ShotSet g = cluster(300, 0, {0.2, -0.1}, {}, 0.1, 3);
  const Fidelity f = assignment_fidelity(g, g);
  EXPECT_TRUE(f.identical);
  EXPECT_DOUBLE_EQ(f.f, 0.5);
  EXPECT_THROW(assignment_fidelity(ShotSet{}, g), std::invalid_argument);
}

TEST(telegraph, fidelity_constructed_errors) {
  const std::complex<double> down{0.0, 0.0}, up{0.6, 0.8};
  const ShotSet g = cluster(1000, 40, down, up, 0.05, 4);
  const ShotSet e = cluster(1000, 360, up, down, 0.05, 5);
  const Fidelity f = assignment_fidelity(g, e);
  EXPECT_NEAR(f.p_down_given_up, 0.36, 1e-12);
  EXPECT_NEAR(f.p_up_given_down, 0.04, 1e-12);
  EXPECT_NEAR(f.f, 0.80, 1e-12);
}

TEST(telegraph, fidelity_threshold_is_optimal) {
  const ShotSet g = cluster(800, 0, {0.0, 0.0}, {}, 0.4, 6);
  const ShotSet e = cluster(800, 0, {1.0, 0.5}, {}, 0.4, 7);
  const Fidelity f = assignment_fidelity(g, e);
  EXPECT_NEAR(Fidelity::at(g, e, f, f.threshold), f.f, 1e-12);
  const double len = std::abs(std::complex<double>(1.0, 0.5));
  for (int i = -20; i <= 40; ++i) {
    const double thr = len * i / 20.0;
    EXPECT_LE(Fidelity::at(g, e, f, thr), f.f + 1e-12) << thr;
  }
  EXPECT_GT(f.f, 0.5);
  EXPECT_LT(f.f, 1.0);
}
