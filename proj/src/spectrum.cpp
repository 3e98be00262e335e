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

#include "asqlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace asqlab {

std::string to_string(const LabelKey& key) {
  return "t" + std::to_string(key.transmon) + (key.spin == Spin::Down ? "_down" : "_up");
}

LabelKey parse_label(const std::string& text) {
  const auto sep = text.find('_');
  if (text.size() < 4 || text[0] != 't' || sep == std::string::npos)
    throw std::invalid_argument("malformed state label '" + text + "'");
  LabelKey key;
  try {
    key.transmon = std::stoi(text.substr(1, sep - 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed state label '" + text + "'");
  }
  const std::string spin = text.substr(sep + 1);
  if (spin == "down") {
    key.spin = Spin::Down;
  } else if (spin == "up") {
    key.spin = Spin::Up;
  } else {
    throw std::invalid_argument("malformed state label '" + text + "'");
  }
  return key;
}

std::optional<Eigen::Index> EigenSolution::find(const LabelKey& key) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].key == key) return static_cast<Eigen::Index>(i);
  return std::nullopt;
}

namespace {

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    // Ties resolve to the lowest index.
    if (a > best_abs * (1.0 + 1e-10)) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs > 0.0) v *= std::conj(v(best)) / best_abs;
}

}  // namespace

EigenSolution diagonalize(const HermitianMatrix& h, Eigen::Index k, const BasisSpec& basis) {
  if (h.rows() != h.cols() || h.rows() == 0)
    throw std::invalid_argument("diagonalize: matrix must be square and non-empty");
  if (k < 1 || k > h.rows()) throw std::out_of_range("diagonalize: k out of range");

  Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("diagonalize: eigensolver did not converge");

  EigenSolution sol;
  sol.basis = basis;
  sol.energies = solver.eigenvalues().head(k);
  sol.states = solver.eigenvectors().leftCols(k);
  const double norm = std::max(solver.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index j = 0; j < k; ++j) {
    fix_phase(sol.states.col(j));
    const double residual = (h * sol.states.col(j) - sol.energies(j) * sol.states.col(j)).norm();
    if (residual > 1e-8 * norm)
      throw std::runtime_error("diagonalize: residual above tolerance for eigenpair " +
                               std::to_string(j));
  }
  return sol;
}

EigenSolution solve(const CircuitParams& params, const BasisSpec& basis, Eigen::Index k) {
  return diagonalize(build_joint_hamiltonian(params, basis), k, basis);
}

namespace {

// <chi| sin(phi - a) |chi> for a charge-basis vector.
double sin_expectation(const Eigen::VectorXcd& chi, double a) {
  const std::complex<double> lower = std::polar(1.0, -a) / std::complex<double>(0.0, 2.0);
  std::complex<double> acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < chi.size(); ++i) {
    acc += std::conj(chi(i + 1)) * lower * chi(i);
    acc += std::conj(chi(i)) * std::conj(lower) * chi(i + 1);
  }
  return acc.real();
}

struct Reference {
  Eigen::MatrixXcd vectors;  // dim x (2 * levels); column 2m + s
  std::vector<LabelKey> keys;
};

Reference product_states(const BasisSpec& basis, Eigen::Index levels,
                         const Eigen::MatrixXcd& transmon_states, const Eigen::Matrix2cd& spin) {
  const Eigen::Index nq = basis.charge_states();
  Reference ref;
  ref.vectors = Eigen::MatrixXcd::Zero(2 * nq, 2 * levels);
  for (Eigen::Index m = 0; m < levels; ++m) {
    for (int s = 0; s < 2; ++s) {
      auto col = ref.vectors.col(2 * m + s);
      for (Eigen::Index i = 0; i < nq; ++i) {
        col(2 * i) = transmon_states(i, m) * spin(0, s);
        col(2 * i + 1) = transmon_states(i, m) * spin(1, s);
      }
      ref.keys.push_back({static_cast<int>(m), s == 0 ? Spin::Down : Spin::Up});
    }
  }
  return ref;
}

// Rotates each cluster of degenerate eigenvectors onto the span of the
// reference states it overlaps most, in order of decreasing weight.
void align_degenerate(EigenSolution& sol, const Eigen::MatrixXcd& ref) {
  constexpr double kDegeneracy = 1e-9;
  const Eigen::Index k = sol.size();
  Eigen::Index start = 0;
  while (start < k) {
    Eigen::Index stop = start + 1;
    while (stop < k && sol.energies(stop) - sol.energies(stop - 1) < kDegeneracy) ++stop;
    const Eigen::Index m = stop - start;
    if (m > 1) {
      const Eigen::MatrixXcd v = sol.states.middleCols(start, m);
      Eigen::MatrixXcd proj = v.adjoint() * ref;  // m x nref
      Eigen::MatrixXcd aligned(v.rows(), m);
      std::vector<bool> used(static_cast<std::size_t>(ref.cols()), false);
      for (Eigen::Index c = 0; c < m; ++c) {
        Eigen::Index best = -1;
        double best_w = 1e-12;
        Eigen::VectorXcd best_vec;
        for (Eigen::Index r = 0; r < ref.cols(); ++r) {
          if (used[static_cast<std::size_t>(r)]) continue;
          Eigen::VectorXcd w = v * proj.col(r);
          for (Eigen::Index p = 0; p < c; ++p) w -= aligned.col(p).dot(w) * aligned.col(p);
          const double weight = w.squaredNorm();
          if (weight > best_w * (1.0 + 1e-9)) {
            best_w = weight;
            best = r;
            best_vec = w;
          }
        }
        if (best < 0) return;  // no usable reference; keep the solver's vectors
        used[static_cast<std::size_t>(best)] = true;
        aligned.col(c) = best_vec / std::sqrt(best_w);
      }
      for (Eigen::Index c = 0; c < m; ++c) {
        sol.states.col(start + c) = aligned.col(c);
        fix_phase(sol.states.col(start + c));
      }
    }
    start = stop;
  }
}

}  // namespace

Eigen::Matrix2cd spin_reference_basis(const CircuitParams& params, const BasisSpec& basis) {
  Eigen::Matrix2cd spin;
  if (params.zeeman.magnitude > 1e-12) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(zeeman_hamiltonian(params.zeeman));
    spin = es.eigenvectors();
    for (int s = 0; s < 2; ++s) fix_phase(spin.col(s));
    return spin;
  }
  // Zero field: sigma_x eigenstates, "down" being the one lowered by the
  // spin-orbit term -E_SO <sin(phi - a)> sigma_x in the transmon ground state.
  const HermitianMatrix transmon = build_transmon_hamiltonian(params, basis);
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(transmon);
  const double s = sin_expectation(es.eigenvectors().col(0), flux_placement(params.phi_ext(), basis.gauge).dot);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd minus(r, -r);
  Eigen::Vector2cd plus(r, r);
  // Energy of sigma_x = +1 is -E_SO * s.
  if (-params.e_so * s < 0.0) {
    spin << plus, minus;
  } else {
    spin << minus, plus;
  }
  return spin;
}

EigenSolution label_states(EigenSolution sol, const CircuitParams& params) {
  const Eigen::Index k = sol.size();
  if (k < 4) throw std::invalid_argument("label_states: need at least four states");
  const BasisSpec& basis = sol.basis;
  if (sol.states.rows() != basis.dimension())
    throw std::invalid_argument("label_states: eigenvectors do not match the basis");

  const HermitianMatrix transmon = build_transmon_hamiltonian(params, basis);
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> tes(transmon);
  const Eigen::Index levels = std::min<Eigen::Index>(basis.charge_states(), k + 2);
  const Eigen::Matrix2cd spin = spin_reference_basis(params, basis);
  const Reference ref = product_states(basis, levels, tes.eigenvectors(), spin);

  align_degenerate(sol, ref.vectors);

  const Eigen::MatrixXd overlap = (ref.vectors.adjoint() * sol.states).cwiseAbs2();  // nref x k

  // Greedy global assignment by decreasing overlap keeps labels unique.
  std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(overlap.size()));
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index r = 0; r < overlap.rows(); ++r) pairs.emplace_back(overlap(r, j), r, j);
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return std::get<0>(a) > std::get<0>(b);
  });
  std::vector<Eigen::Index> assigned(static_cast<std::size_t>(k), -1);
  std::vector<bool> ref_used(static_cast<std::size_t>(overlap.rows()), false);
  Eigen::Index remaining = k;
  for (const auto& [w, r, j] : pairs) {
    if (remaining == 0) break;
    if (assigned[static_cast<std::size_t>(j)] >= 0 || ref_used[static_cast<std::size_t>(r)]) continue;
    assigned[static_cast<std::size_t>(j)] = r;
    ref_used[static_cast<std::size_t>(r)] = true;
    --remaining;
  }

  sol.labels.assign(static_cast<std::size_t>(k), StateLabel{});
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index r = assigned[static_cast<std::size_t>(j)];
    StateLabel& label = sol.labels[static_cast<std::size_t>(j)];
    label.key = ref.keys[static_cast<std::size_t>(r)];
    label.confidence = overlap(r, j);
    Eigen::Index runner = -1;
    double runner_w = -1.0;
    for (Eigen::Index q = 0; q < overlap.rows(); ++q) {
      if (q != r && overlap(q, j) > runner_w) {
        runner_w = overlap(q, j);
        runner = q;
      }
    }
    if (label.confidence < kHybridizationConfidence && runner >= 0) {
      label.alternative = ref.keys[static_cast<std::size_t>(runner)];
      label.alternative_confidence = runner_w;
    }
  }
  return sol;
}

std::string to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::Transmon: return "transmon";
    case TransitionKind::SpinFlip: return "spin-flip";
    case TransitionKind::DoubleExcitation: return "double-excitation";
    case TransitionKind::Swap: return "swap";
    case TransitionKind::Other: break;
  }
  return "other";
}

TransitionKind classify(const LabelKey& from, const LabelKey& to) {
  const int dt = to.transmon - from.transmon;
  if (dt == 0 && from.spin != to.spin) return TransitionKind::SpinFlip;
  if (dt == 1 && from.spin == to.spin) return TransitionKind::Transmon;
  if (dt == 1 && from.spin == Spin::Down && to.spin == Spin::Up) return TransitionKind::DoubleExcitation;
  if (dt == 1 && from.spin == Spin::Up && to.spin == Spin::Down) return TransitionKind::Swap;
  return TransitionKind::Other;
}

std::optional<Transition> TransitionSet::find(TransitionKind kind) const {
  for (const auto& t : entries)
    if (t.kind == kind) return t;
  return std::nullopt;
}

std::optional<Transition> TransitionSet::find(const LabelKey& to) const {
  for (const auto& t : entries)
    if (t.to == to) return t;
  return std::nullopt;
}

TransitionSet transitions(const EigenSolution& sol, const LabelKey& from) {
  const auto i = sol.find(from);
  if (!i) throw std::invalid_argument("transitions: label " + to_string(from) + " not present");
  TransitionSet set;
  const auto& lf = sol.labels[static_cast<std::size_t>(*i)];
  for (Eigen::Index j = 0; j < sol.size(); ++j) {
    if (j == *i) continue;
    const auto& lt = sol.labels[static_cast<std::size_t>(j)];
    set.entries.push_back({from, lt.key, classify(from, lt.key), sol.energies(j) - sol.energies(*i),
                           std::min(lf.confidence, lt.confidence)});
  }
  return set;
}

JointTransitions joint_transitions(const EigenSolution& sol) {
  const auto energy = [&](int t, Spin s) {
    const auto i = sol.find({t, s});
    if (!i) throw std::invalid_argument("joint_transitions: missing label " + to_string(LabelKey{t, s}));
    return sol.energies(*i);
  };
  const double g_down = energy(0, Spin::Down);
  const double g_up = energy(0, Spin::Up);
  const double e_down = energy(1, Spin::Down);
  const double e_up = energy(1, Spin::Up);
  JointTransitions out;
  out.transmon_down = e_down - g_down;
  out.transmon_up = e_up - g_up;
  out.spin_flip = g_up - g_down;
  out.double_excitation = e_up - g_down;
  out.swap = e_down - g_up;
  return out;
}

}  // namespace asqlab
