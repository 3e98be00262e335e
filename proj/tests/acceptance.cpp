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

// Acceptance checks. Each criterion prints one PASS or FAIL line followed by
// the measured quantities; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asqlab/analysis.hpp"
#include "asqlab/models.hpp"
#include "asqlab/perturbation.hpp"
#include "asqlab/spectrum.hpp"
#include "asqlab/sweep.hpp"
#include "asqlab/telegraph.hpp"
#include "catalogue.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace asqlab;
namespace fs = std::filesystem;

namespace {

// Tolerances and reference values, one place.
namespace tol {
constexpr double kPhiZpfLow = 0.45, kPhiZpfHigh = 0.46;
constexpr double kJTransverse = 0.145, kJTransverseRel = 0.05;
// Bounds are quoted with two significant figures; accept one unit in the
// last quoted digit.
constexpr double kBoundAbs = 0.01;
constexpr double kBeta = 0.887, kBetaAbs = 0.001;
constexpr double kC1Seconds = 1.0;

constexpr double kOracleRel = 1e-6;
constexpr double kAsymptoticRel = 0.02;
constexpr double kC2Seconds = 5.0;

constexpr double kGaugeAbs = 1e-9;
constexpr double kKramersAbs = 1e-9;
constexpr int kGaugeSets = 20;
constexpr double kC3Seconds = 30.0;

constexpr double kSplitting = 0.104, kSplittingRel = 0.20;
constexpr double kCouplingRel = 0.15;
constexpr std::size_t kFluxPoints = 401;
constexpr double kC4Seconds = 120.0;

constexpr double kIdentityAbs = 1e-6;  // 1 kHz in GHz

constexpr double kSpinFlip = 11.5, kSpinFlipRel = 0.05;

constexpr double kG = 12.7, kSigmaG = 0.2, kCoverageG = 0.95;
constexpr int kSeedsG = 100;

constexpr double kNoiselessRel = 1e-5;
constexpr double kCoverageFit = 0.90;
constexpr int kSeedsFit = 200;
constexpr double kNoiseLevel = 0.05;
constexpr double kC8Seconds = 60.0;

constexpr double kRabiNoiseRel = 0.02;

constexpr double kBoltzmannRel = 0.01;
constexpr double kSinglePoint = 81.0, kSinglePointAbs = 1.0;

constexpr double kDwellRel = 0.10, kPopulationRel = 0.20;
constexpr double kC11Seconds = 30.0;

constexpr double kFidelity = 0.80, kFidelityAbs = 0.01;
}  // namespace tol

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Report {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

bool within_rel(double v, double ref, double rel) { return std::abs(v - ref) <= rel * std::abs(ref); }

Report c1_closed_forms() {
  Report r;
  const auto t0 = Clock::now();
  const double zpf = phi_zpf(presets::main_text());
  r.check(zpf >= tol::kPhiZpfLow && zpf <= tol::kPhiZpfHigh, fmt("phi_zpf = %.6f", zpf));
  const double jt = coupling_strengths(presets::coupling_estimate()).j_transverse;
  r.check(within_rel(jt, tol::kJTransverse, tol::kJTransverseRel), fmt("j_transverse = %.5f GHz", jt));
  const double sigma_f = 39.7;
  const struct {
    double s, target;
    const char* unit;
  } bounds[] = {{0.16, 0.25, "mV"}, {0.07, 0.57, "mV"}, {0.18, 0.22, "mT"}, {0.05, 0.80, "mT"}};
  for (const auto& b : bounds) {
    const double v = susceptibility_bound(sigma_f, b.s);
    r.check(std::abs(v - b.target) <= tol::kBoundAbs,
            fmt("bound %.4f", v) + " " + b.unit + fmt(" vs %.2f", b.target));
  }
  const double beta = beta_from_gamma(0.47);
  r.check(std::abs(beta - tol::kBeta) <= tol::kBetaAbs, fmt("beta(0.47) = %.5f", beta));
  const double s = seconds_since(t0);
  r.check(s < tol::kC1Seconds, fmt("runtime %.3f s", s));
  return r;
}

Report c2_transmon_limit() {
  Report r;
  const auto t0 = Clock::now();
  CircuitParams p = presets::main_text();
  p.e_0 = 0.0;
  p.e_so = 0.0;
  const EigenSolution sol = solve(p, {}, 4);
  const double f01 = sol.energies[2] - sol.energies[0];

  // Dense oracle on charges -200..200, assembled independently.
  const int n = 200;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n + 1, 2 * n + 1);
  for (int q = -n; q <= n; ++q) h(q + n, q + n) = 4.0 * p.e_c * q * q;
  for (int i = 0; i < 2 * n; ++i) h(i, i + 1) = h(i + 1, i) = -p.e_j / 2.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  const double dense = es.eigenvalues()[1] - es.eigenvalues()[0];
  const auto sturm = oracle::transmon_levels(p.e_c, p.e_j, n, 2);
  const double bisect = sturm[1] - sturm[0];

  r.check(within_rel(f01, dense, tol::kOracleRel), fmt("f01 = %.9f GHz", f01) + fmt(", dense oracle %.9f", dense));
  r.check(within_rel(f01, bisect, tol::kOracleRel), fmt("bisection oracle %.9f", bisect));
  const double asym = std::sqrt(8.0 * p.e_j * p.e_c) - p.e_c;
  r.check(within_rel(f01, asym, tol::kAsymptoticRel), fmt("sqrt(8 EJ Ec) - Ec = %.4f", asym));
  const double s = seconds_since(t0);
  r.check(s < tol::kC2Seconds, fmt("runtime %.3f s", s));
  return r;
}

Report c3_gauge_kramers() {
  Report r;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int i = 0; i < tol::kGaugeSets; ++i) {
    const CircuitParams p = testing_util::random_params(rng);
    const BasisSpec a{40, Gauge::FluxOnDot}, b{40, Gauge::FluxOnReference};
    const Eigen::VectorXd ea = solve(p, a, a.dimension()).energies;
    const Eigen::VectorXd eb = solve(p, b, b.dimension()).energies;
    worst = std::max(worst, (ea - eb).cwiseAbs().maxCoeff());
  }
  r.check(worst <= tol::kGaugeAbs, fmt("gauge difference %.2e GHz over all levels", worst));

  double split = 0.0;
  std::vector<CircuitParams> sets{presets::main_text()};
  for (int i = 0; i < 4; ++i) sets.push_back(testing_util::random_params(rng));
  for (CircuitParams p : sets) {
    p.zeeman = {};
    for (double phi : {0.0, kPi}) {
      p.set_phi_ext(phi);
      const BasisSpec b{};
      const Eigen::VectorXd e = solve(p, b, b.dimension()).energies;
      for (Eigen::Index i = 0; i + 1 < e.size(); i += 2) split = std::max(split, e[i + 1] - e[i]);
    }
  }
  r.check(split <= tol::kKramersAbs, fmt("largest Kramers pair splitting %.2e GHz", split));
  const double s = seconds_since(t0);
  r.check(s < tol::kC3Seconds, fmt("runtime %.2f s", s));
  return r;
}

Report c4_avoided_crossing() {
  Report r;
  const auto t0 = Clock::now();
  const CircuitParams p = presets::main_text();
  const double theta = testing_util::deg(35.6);
  const auto grid = linspace(0.0, kTwoPi, tol::kFluxPoints);
  SweepOptions opt;
  opt.jobs = 4;
  const SweepResult sw = sweep_flux(p, grid, 28.0, 12.7, theta, opt);
  const CrossingReport c = find_avoided_crossing(sw, "t0_up", "t1_down");
  r.check(c.found, "crossing between t0_up and t1_down found");
  if (!c.found) return r;
  r.check(within_rel(c.splitting, tol::kSplitting, tol::kSplittingRel),
          fmt("2J = %.5f GHz", c.splitting) + fmt(" at phi_ext = %.4f", c.location));
  CircuitParams at = p;
  at.zeeman = zeeman_from_field(28.0, 12.7, theta);
  at.set_phi_ext(c.location);
  const CouplingEstimate e = coupling_strengths(at);
  r.check(within_rel(c.splitting, 2.0 * e.j_transverse, tol::kCouplingRel),
          fmt("2 j_transverse at the crossing = %.5f GHz", 2.0 * e.j_transverse));
  r.info(fmt("2 j_longitudinal at the crossing = %.5f GHz", 2.0 * e.j_longitudinal));
  for (const CrossingReport& x : find_avoided_crossings(sw, "t0_up", "t1_down")) {
    r.info(fmt("local minimum phi_ext = %.4f", x.location) + fmt(", 2J = %.5f GHz", x.splitting));
  }
  const double s = seconds_since(t0);
  r.check(s < tol::kC4Seconds, fmt("runtime %.2f s", s));
  return r;
}

Report c5_transition_algebra() {
  Report r;
  CircuitParams p = presets::main_text();
  p.zeeman = zeeman_from_field(65.0, 12.7, testing_util::deg(35.6));
  p.set_phi_ext(1.5 * kPi);
  const JointTransitions jt = joint_transitions(label_states(solve(p, {}, 10), p));
  r.info(fmt("f_transmon = %.5f GHz", jt.transmon_down) + fmt(", f_spin = %.5f GHz", jt.spin_flip));
  r.check(std::abs(jt.double_excitation_residual()) < tol::kIdentityAbs,
          fmt("double excitation residual %.2e GHz", jt.double_excitation_residual()));
  r.check(std::abs(jt.swap_residual()) < tol::kIdentityAbs,
          fmt("swap residual %.2e GHz", jt.swap_residual()));
  return r;
}

Report c6_field_scale() {
  Report r;
  const auto grid = linspace(0.0, 65.0, 14);
  const SweepResult sw = sweep_field(presets::main_text(), grid, 12.7, testing_util::deg(35.6), 1.5 * kPi);
  const auto t = sw.points.back().transitions.find(TransitionKind::SpinFlip);
  r.check(t.has_value(), "spin flip labeled at 65 mT");
  if (!t) return r;
  r.check(within_rel(t->frequency, tol::kSpinFlip, tol::kSpinFlipRel), fmt("f_s(65 mT) = %.4f GHz", t->frequency));
  return r;
}

Report c7_gfactor() {
  Report r;
  const auto b = linspace(0.0, 65.0, 27);
  const double slope = tol::kG * kBohrMagnetonGHzPerTesla * 1e-3;
  int covered = 0;
  double worst_sigma = 0.0, mean_g = 0.0;
  for (int seed = 0; seed < tol::kSeedsG; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + seed));
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> f, sigma;
    for (double x : b) {
      const double clean = 0.25 + slope * x;
      sigma.push_back(0.01 * clean);
      f.push_back(clean * (1.0 + 0.01 * n01(rng)));
    }
    const GFactorFit g = fit_gfactor(b, f, sigma);
    mean_g += g.g / tol::kSeedsG;
    worst_sigma = std::max(worst_sigma, g.sigma_g);
    if (std::abs(g.g - tol::kG) <= 2.0 * g.sigma_g) ++covered;
  }
  const double coverage = static_cast<double>(covered) / tol::kSeedsG;
  r.check(std::abs(mean_g - tol::kG) <= tol::kSigmaG, fmt("mean g = %.4f", mean_g));
  r.check(worst_sigma <= tol::kSigmaG, fmt("largest sigma_g = %.4f", worst_sigma));
  r.check(coverage >= tol::kCoverageG, fmt("2-sigma coverage %.2f", coverage));
  return r;
}

Report c8_catalogue() {
  Report r;
  const auto t0 = Clock::now();
  for (const auto& c : catalogue_cases::cases()) {
    const FitModel m = make_model(c.model);
    const FitResult clean = fit(m, c.x, m(c.x, c.truth));
    double worst = 0.0;
    for (Eigen::Index k = 0; k < c.truth.size(); ++k) {
      worst = std::max(worst, std::abs(clean.values[k] - c.truth[k]) / std::abs(c.truth[k]));
    }
    r.check(worst <= tol::kNoiselessRel, c.name + fmt(": noiseless relative error %.1e", worst));

    std::vector<int> covered(static_cast<std::size_t>(c.truth.size()), 0);
    for (int seed = 0; seed < tol::kSeedsFit; ++seed) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
      Eigen::VectorXd sigma;
      const Eigen::VectorXd y = catalogue_cases::noisy(m(c.x, c.truth), tol::kNoiseLevel, c.noise, rng, sigma);
      std::optional<Eigen::VectorXd> w;
      if (c.noise == catalogue_cases::Noise::Relative) w = sigma.array().square().inverse().matrix();
      const FitResult fr = fit(m, c.x, y, w);
      for (Eigen::Index k = 0; k < c.truth.size(); ++k) {
        if (std::abs(fr.values[k] - c.truth[k]) <= 2.0 * fr.sigmas[k]) ++covered[static_cast<std::size_t>(k)];
      }
    }
    for (std::size_t k = 0; k < covered.size(); ++k) {
      const double cov = static_cast<double>(covered[k]) / tol::kSeedsFit;
      r.check(cov >= tol::kCoverageFit, c.name + " " + m.names[k] + fmt(": coverage %.3f", cov));
    }
  }
  const double s = seconds_since(t0);
  r.check(s < tol::kC8Seconds, fmt("runtime %.2f s", s));
  return r;
}

Report c9_rabi_noise() {
  Report r;
  std::vector<std::pair<double, double>> pairs;
  for (double f = 10.0; f <= 200.0; f += 10.0) pairs.emplace_back(f, rabi_decay_time(f, 39.7, 0.25));
  const RabiNoise n = rabi_noise_extract(pairs);
  r.check(within_rel(n.sigma_f, 39.7, tol::kRabiNoiseRel), fmt("sigma_f = %.4f MHz", n.sigma_f));
  r.check(within_rel(n.c, 0.25, tol::kRabiNoiseRel), fmt("C = %.5f", n.c));
  bool exact = true;
  for (double f : {1.0, 10.0, 37.0, 200.0}) {
    exact = exact && rabi_decay_time(f, 39.7, 0.0) == rabi_decay_frequency_noise_limit(f, 39.7);
    exact = exact && rabi_decay_time(f, 0.0, 0.25) == rabi_decay_drive_noise_limit(f, 0.25);
  }
  r.check(exact, "single-term limits reproduce the asymptotes exactly");
  return r;
}

Report c10_boltzmann() {
  Report r;
  std::vector<std::pair<double, double>> pts;
  for (double f : linspace(0.3, 12.0, 25)) pts.emplace_back(f, models::boltzmann(f, 100.0));
  const BoltzmannFit b = boltzmann_temperature(pts);
  r.check(within_rel(b.t_eff_mK, 100.0, tol::kBoltzmannRel), fmt("T_eff = %.4f mK", b.t_eff_mK));
  const std::vector<std::pair<double, double>> one{{0.6, 0.7}};
  const BoltzmannFit s = boltzmann_temperature(one);
  r.check(std::abs(s.t_eff_mK - tol::kSinglePoint) <= tol::kSinglePointAbs,
          fmt("single point T_eff = %.3f mK", s.t_eff_mK));
  return r;
}

Report c11_telegraph() {
  Report r;
  const auto t0 = Clock::now();
  TelegraphSpec spec;
  spec.duration = 17.0;
  spec.noise_sigma = 0.1 * std::abs(spec.level_s - spec.level_d);
  spec.rng_seed = 17;
  const TelegraphTrace trace = simulate_telegraph(spec);
  const DwellTimes d = dwell_times(trace, {0.5 * (spec.level_s + spec.level_d)});
  r.check(within_rel(d.t_s, spec.dwell_s, tol::kDwellRel), fmt("T_s = %.2f us", d.t_s));
  r.check(within_rel(d.t_d, spec.dwell_d, tol::kDwellRel), fmt("T_d = %.1f us", d.t_d));
  const DoubleGaussian dg = double_gaussian_fit(histogram(trace.samples, 200));
  const double minority = spec.dwell_s / (spec.dwell_s + spec.dwell_d);
  // Singlet sits at the higher level.
  r.check(within_rel(dg.population2, minority, tol::kPopulationRel),
          fmt("minority population %.5f", dg.population2) + fmt(" vs %.5f", minority));
  const double s = seconds_since(t0);
  r.check(s < tol::kC11Seconds, fmt("runtime %.2f s", s));
  return r;
}

Report c12_fidelity() {
  Report r;
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 0.1);
  const std::complex<double> down{0.1, -0.2}, up{0.9, 0.4};
  ShotSet ground, excited;
  for (int i = 0; i < 2000; ++i) {
    ground.shots.push_back((i < 80 ? up : down) + std::complex<double>(g(rng), g(rng)));
    excited.shots.push_back((i < 720 ? down : up) + std::complex<double>(g(rng), g(rng)));
  }
  const Fidelity f = assignment_fidelity(ground, excited);
  r.check(std::abs(f.f - tol::kFidelity) <= tol::kFidelityAbs,
          fmt("F = %.4f", f.f) + fmt(", P(down|up) = %.3f", f.p_down_given_up) +
              fmt(", P(up|down) = %.3f", f.p_up_given_down));
  // No cut between projected shots does better than the reported one.
  std::vector<double> cuts;
  for (const auto& z : ground.shots) cuts.push_back(f.project(z));
  for (const auto& z : excited.shots) cuts.push_back(f.project(z));
  double best = 0.0;
  for (double c : cuts) best = std::max(best, Fidelity::at(ground, excited, f, c));
  r.check(best <= f.f + 1e-12 && std::abs(Fidelity::at(ground, excited, f, f.threshold) - f.f) < 1e-12,
          fmt("best scanned cut %.4f", best));
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Report c13_determinism() {
  Report r;
  const fs::path root = fs::temp_directory_path() / "asqlab_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string cli = ASQLAB_CLI_PATH;
  const std::vector<std::string> runs = {
      "synth rabi --seed 7 --set synth.noise=0.05 --set synth.params=a=0.45,omega=0.23,decay=27,c=0.5",
      "telegraph-sim --seed 11 --set telegraph.duration=0.2",
      "synth shots --seed 5 --set synth.noise=0.3 --set synth.points=300",
      "sweep-flux --jobs 3 --set sweep.points=9 --set circuit.b_mT=28 --set sweep.theta=0.6213",
  };
  bool all_equal = true;
  std::size_t files = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / ("run" + std::to_string(i) + "_" + std::to_string(rep));
      const std::string cmd = "\"" + cli + "\" " + runs[i] + " --out \"" + dir.string() + "\" > /dev/null";
      const int status = std::system(cmd.c_str());
      r.check(status == 0, "exit 0: " + runs[i]);
      dirs.push_back(dir);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const fs::path other = dirs[1] / entry.path().filename();
      const bool same = fs::exists(other) && slurp(entry.path()) == slurp(other);
      all_equal = all_equal && same;
      ++files;
      if (!same) r.info("differs: " + entry.path().filename().string());
    }
  }
  r.check(all_equal && files > 0, std::to_string(files) + " output files byte-identical");
  fs::remove_all(root);
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Report()>>> criteria = {
      {"1 closed-form reproduction", c1_closed_forms},
      {"2 transmon limit", c2_transmon_limit},
      {"3 gauge invariance and Kramers degeneracy", c3_gauge_kramers},
      {"4 avoided crossing", c4_avoided_crossing},
      {"5 transition algebra", c5_transition_algebra},
      {"6 field scale", c6_field_scale},
      {"7 g-factor fit coverage", c7_gfactor},
      {"8 fit catalogue round trips", c8_catalogue},
      {"9 Rabi noise model", c9_rabi_noise},
      {"10 Boltzmann temperature", c10_boltzmann},
      {"11 telegraph round trip", c11_telegraph},
      {"12 assignment fidelity", c12_fidelity},
      {"13 CLI determinism", c13_determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Report rep;
    try {
      rep = fn();
    } catch (const std::exception& e) {
      rep.check(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %s\n", rep.pass ? "PASS" : "FAIL", name.c_str());
    for (const std::string& n : rep.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!rep.pass) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
