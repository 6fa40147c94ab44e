// Copyright 2026 The irho Authors
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

#include <array>
#include <cstdint>
#include <optional>

#include "irho/ensemble.hpp"
#include "irho/qstate.hpp"
#include "irho/rng.hpp"

namespace irho {

struct Outcome {
  EigenIndex eigen_index;
  PureState collapsed_state;
};

// Born-rule measurement. One uniform draw; plus iff draw < P(plus). The
// particle is left in the observed eigenstate.
Outcome measure_pure(Particle& p, const Basis& basis, Rng& rng);

// P(a, b) = |<a (x) b|psi>|^2, indexed [2 * a + b] with plus = 0, minus = 1.
using JointDistribution = std::array<double, 4>;
JointDistribution joint_probabilities(const TwoQubitState& psi, const Basis& basis_a,
                                      const Basis& basis_b);

// Distribution produced by collapsing the first particle of a singlet in
// `basis_a` and then measuring the partner in `basis_b`, computed exactly.
// UnsupportedInput unless psi is the singlet (up to phase).
JointDistribution sequential_probabilities(const TwoQubitState& psi, const Basis& basis_a,
                                           const Basis& basis_b);

inline double anticorrelation(const JointDistribution& p) { return p[1] + p[2]; }
// E = P(same) - P(different) with outcomes valued +1 / -1.
inline double correlator(const JointDistribution& p) { return p[0] + p[3] - p[1] - p[2]; }

bool is_singlet(const TwoQubitState& psi);

// Two-particle state machine: intact -> collapsed -> both measured. A pair
// must not be shared between threads while it is being driven.
class EntangledPair {
 public:
  enum class Status { kIntact, kCollapsed, kBothMeasured };

  explicit EntangledPair(TwoQubitState joint = TwoQubitState::singlet(),
                         std::uint64_t sequence_no = 0)
      : joint_(joint), sequence_no_(sequence_no) {}

  const TwoQubitState& joint() const { return joint_; }
  Status status() const { return status_; }
  std::uint64_t sequence_no() const { return sequence_no_; }

  // The partner particle after the first collapse; StateError while intact.
  const Particle& remote() const;
  // Basis and outcome of the first measurement; StateError while intact.
  const Basis& first_basis() const;
  EigenIndex first_outcome() const;

 private:
  friend Outcome collapse_first(EntangledPair&, const Basis&, Rng&);
  friend Outcome collapse_first_postselected(EntangledPair&, const Basis&, EigenIndex);
  friend Outcome measure_second(EntangledPair&, const Basis&, Rng&);

  Outcome collapse_as(const Basis& basis, EigenIndex outcome);

  TwoQubitState joint_;
  std::uint64_t sequence_no_;
  Status status_ = Status::kIntact;
  std::optional<Particle> remote_;
  std::optional<Basis> first_basis_;
  EigenIndex first_outcome_ = EigenIndex::kPlus;
};

// Measures the first particle. The outcome follows the first particle's
// reduced density matrix; the partner immediately becomes the opposite
// eigenstate of the same basis and carries that basis as its preparation
// label. Singlet pairs only (UnsupportedInput otherwise); StateError if the
// pair is not intact.
Outcome collapse_first(EntangledPair& pair, const Basis& basis, Rng& rng);

// As collapse_first, conditioned on a given first outcome (postselection).
// DomainError if that outcome has zero probability.
Outcome collapse_first_postselected(EntangledPair& pair, const Basis& basis, EigenIndex outcome);

// Born-rule measurement of the partner. StateError unless the first
// particle has been collapsed and the partner not yet measured.
Outcome measure_second(EntangledPair& pair, const Basis& basis, Rng& rng);

}  // namespace irho
