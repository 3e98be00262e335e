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
#include <complex>
#include <random>

#include "gtest/gtest.h"

#include "asqlab/perturbation.hpp"
#include "test_util.hpp"

using namespace asqlab;

TEST(perturbation, ej_eff_examples) {
  CircuitParams p = presets::main_text();
  EXPECT_NEAR(ej_eff(p), 13.311, 1e-12);
  p.set_phi_ext(kPi / 2);
  EXPECT_NEAR(ej_eff(p), 12.889, 1e-12);
  p.set_phi_ext(kPi);
  EXPECT_NEAR(ej_eff(p), 13.311, 1e-12);
}

TEST(perturbation, ej_eff_symmetric_squid_vanishes_at_half_flux) {
  CircuitParams p(0.3, 5.0, 5.0, 0.0, {}, kPi / 2);
  EXPECT_NEAR(ej_eff(p), 0.0, 1e-12);
  p = CircuitParams(0.3, 0.0, 0.0, 0.0, {}, 0.0);
  EXPECT_THROW(ej_eff(p), std::invalid_argument);
  EXPECT_THROW(phi_zpf(p), std::invalid_argument);
}

TEST(perturbation, phi_zpf_examples) {
  CircuitParams p = presets::main_text();
  EXPECT_NEAR(phi_zpf(p), 0.4545005, 1e-6);
  EXPECT_GE(phi_zpf(p), 0.45);
  EXPECT_LE(phi_zpf(p), 0.46);
  p.set_phi_ext(kPi / 2);
  EXPECT_NEAR(phi_zpf(p), 0.4581759, 1e-6);
}

TEST(perturbation, coupling_examples) {
  CircuitParams p = presets::coupling_estimate();
  CouplingEstimate c = coupling_strengths(p);
  EXPECT_NEAR(c.j_transverse, 0.14044, 1e-5);
  EXPECT_NEAR(c.j_longitudinal, 0.0, 1e-15);
  EXPECT_NEAR(c.static_spin_orbit, 0.0, 1e-15);
  p.e_so = 0.305;
  EXPECT_NEAR(coupling_strengths(p).j_transverse, 0.13862, 1e-5);
  p.set_phi_ext(kPi / 2);
  c = coupling_strengths(p);
  EXPECT_NEAR(c.j_transverse, 0.0, 1e-15);
  EXPECT_NEAR(c.static_spin_orbit, 0.305, 1e-12);
}

TEST(perturbation, theta_partition) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const CircuitParams p = testing_util::random_params(rng);
    const CouplingEstimate c = coupling_strengths(p);
    const double total = p.e_so * std::cos(p.phi_ext()) * phi_zpf(p);
    EXPECT_NEAR(std::hypot(c.j_transverse, c.j_longitudinal), std::abs(total), 1e-12);
    EXPECT_NEAR(c.j_transverse, total * std::cos(p.zeeman.theta), 1e-12);
    EXPECT_NEAR(c.j_longitudinal, total * std::sin(p.zeeman.theta), 1e-12);
    EXPECT_NEAR(c.ej_eff, ej_eff(p), 1e-12);
    EXPECT_NEAR(c.phi_zpf, phi_zpf(p), 1e-12);
  }
}

TEST(perturbation, rotation_is_orthogonal) {
  for (double theta : {0.0, 0.3, 1.2, kPi / 2, 2.9, kPi}) {
    const Eigen::Matrix2d u = spin_rotation(theta);
    EXPECT_LT((u.transpose() * u - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(u.determinant(), 1.0, 1e-15);
  }
}

TEST(perturbation, rotation_maps_sigma_x) {
  Eigen::Matrix2d sx, sz;
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  for (double theta : {0.0, 0.4, 1.7, kPi}) {
    const Eigen::Matrix2d u = spin_rotation(theta);
    const Eigen::Matrix2d rotated = u.transpose() * sx * u;
    const Eigen::Matrix2d expected = std::cos(theta) * sx + std::sin(theta) * sz;
    EXPECT_LT((rotated - expected).cwiseAbs().maxCoeff(), 1e-15) << theta;
  }
}

TEST(perturbation, rotation_templated_on_scalar) {
  const Eigen::Matrix2f u = spin_rotation(0.5f);
  EXPECT_NEAR(u(0, 0), std::cos(0.25f), 1e-7f);
  const Eigen::Matrix<long double, 2, 2> v = spin_rotation<long double>(0.5L);
  EXPECT_NEAR(static_cast<double>(v(1, 0)), std::sin(0.25), 1e-15);
}
