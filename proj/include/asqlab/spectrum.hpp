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

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asqlab/circuit.hpp"
#include "asqlab/hamiltonian.hpp"

namespace asqlab {

enum class Spin { Down, Up };

struct LabelKey {
  int transmon = 0;
  Spin spin = Spin::Down;

  friend auto operator<=>(const LabelKey&, const LabelKey&) = default;
};

std::string to_string(const LabelKey& key);
/// Parses the "t<index>_<down|up>" form produced by to_string.
LabelKey parse_label(const std::string& text);

/// Product-state tag of an eigenstate. `confidence` is the squared overlap
/// with the tagged product state. When the state is hybridized the runner-up
/// tag is kept in `alternative`.
struct StateLabel {
  LabelKey key;
  double confidence = 0.0;
  std::optional<LabelKey> alternative;
  double alternative_confidence = 0.0;

  bool ambiguous() const { return alternative.has_value(); }
};

// Below this squared overlap a label is treated as hybridized.
inline constexpr double kHybridizationConfidence = 0.55;

struct EigenSolution {
  Eigen::VectorXd energies;  // GHz, ascending
  Eigen::MatrixXcd states;   // columns aligned with energies
  std::vector<StateLabel> labels;
  BasisSpec basis;

  Eigen::Index size() const { return energies.size(); }
  bool labeled() const { return !labels.empty(); }
  std::optional<Eigen::Index> find(const LabelKey& key) const;
};

/// Lowest `k` eigenpairs of a Hermitian matrix by dense decomposition.
///
/// Each eigenvector is rotated so that its largest-magnitude component is
/// real and positive. Throws std::out_of_range for k outside [1, dim] and
/// std::runtime_error when the decomposition fails or a residual exceeds
/// 1e-8 ||H||.
EigenSolution diagonalize(const HermitianMatrix& h, Eigen::Index k, const BasisSpec& basis = {});

/// Builds and diagonalizes the joint Hamiltonian in one call.
EigenSolution solve(const CircuitParams& params, const BasisSpec& basis, Eigen::Index k);

/// Tags each state with the (transmon level, spin) product state of
/// maximal overlap. Product states use transmon eigenstates without the
/// spin-orbit term and the H_Z eigenbasis for the spin (the sigma_x
/// eigenbasis at zero field, ordered by spin-orbit energy). Degenerate
/// eigenvectors are first rotated onto the product states they overlap
/// most. Requires at least four states.
EigenSolution label_states(EigenSolution sol, const CircuitParams& params);

/// Reference spin basis used by label_states; column 0 is "down".
Eigen::Matrix2cd spin_reference_basis(const CircuitParams& params, const BasisSpec& basis);

enum class TransitionKind { Transmon, SpinFlip, DoubleExcitation, Swap, Other };

std::string to_string(TransitionKind kind);

struct Transition {
  LabelKey from;
  LabelKey to;
  TransitionKind kind = TransitionKind::Other;
  double frequency = 0.0;  // GHz
  double confidence = 0.0;
};

struct TransitionSet {
  std::vector<Transition> entries;

  std::optional<Transition> find(TransitionKind kind) const;
  std::optional<Transition> find(const LabelKey& to) const;
};

TransitionKind classify(const LabelKey& from, const LabelKey& to);

/// Transitions from the state tagged `from` to every other labeled state.
/// Throws std::invalid_argument when `from` is not among the labels.
TransitionSet transitions(const EigenSolution& sol, const LabelKey& from);

/// Frequencies of the four joint transitions of the lowest two transmon
/// levels. The double excitation |0 down> -> |1 up> splits into the spin
/// flip plus the spin-up transmon line, the swap |0 up> -> |1 down> into the
/// spin-down transmon line minus the spin flip.
struct JointTransitions {
  double transmon_down = 0.0;
  double transmon_up = 0.0;
  double spin_flip = 0.0;
  double double_excitation = 0.0;
  double swap = 0.0;

  double double_excitation_residual() const { return double_excitation - transmon_up - spin_flip; }
  double swap_residual() const { return swap - transmon_down + spin_flip; }
};

JointTransitions joint_transitions(const EigenSolution& sol);

}  // namespace asqlab
