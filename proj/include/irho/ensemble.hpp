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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "irho/qstate.hpp"
#include "irho/rng.hpp"

namespace irho {

// How a particle was made: either an eigenstate of a concrete basis or a
// Haar-random pure state.
class PreparationLabel {
 public:
  static PreparationLabel uniform_random(std::uint64_t sequence_no) {
    return PreparationLabel(std::nullopt, std::nullopt, sequence_no);
  }
  static PreparationLabel eigenstate(const Basis& basis, EigenIndex index,
                                     std::uint64_t sequence_no) {
    return PreparationLabel(basis, index, sequence_no);
  }

  bool has_basis() const { return basis_.has_value(); }
  // Only meaningful when has_basis().
  const Basis& basis() const { return *basis_; }
  EigenIndex eigen_index() const { return *index_; }
  std::uint64_t sequence_no() const { return sequence_no_; }

 private:
  PreparationLabel(std::optional<Basis> basis, std::optional<EigenIndex> index,
                   std::uint64_t sequence_no)
      : basis_(std::move(basis)), index_(index), sequence_no_(sequence_no) {}

  std::optional<Basis> basis_;
  std::optional<EigenIndex> index_;
  std::uint64_t sequence_no_;
};

class Particle;

// Counterfactual devices. Nothing physical can read a preparation record or
// copy an unknown state; these functions exist so the oracle modes can.
namespace counterfactual {
const PreparationLabel& read_label(const Particle& p);
// The exact state, as a perfect cloner would reproduce it.
PureState clone_state(const Particle& p);
}  // namespace counterfactual

// A physically accessible state plus a sealed preparation record.
class Particle {
 public:
  // Throws DomainError if a concrete label disagrees with the state.
  Particle(PureState state, PreparationLabel label);

  // Projective collapse into `index` of `basis`. The particle is thereafter
  // an eigenstate of that basis and is relabelled accordingly.
  void collapse_to(const Basis& basis, EigenIndex index);

  const PureState& state() const { return state_; }

 private:
  friend const PreparationLabel& counterfactual::read_label(const Particle& p);
  friend PureState counterfactual::clone_state(const Particle& p);

  PureState state_;
  PreparationLabel label_;
};

enum class SplitMode { kSampled, kExactHalf };

class Ensemble {
 public:
  Ensemble(std::vector<Particle> particles, DensityMatrix declared_density);

  const std::vector<Particle>& particles() const { return particles_; }
  std::vector<Particle>& particles() { return particles_; }
  std::size_t size() const { return particles_.size(); }
  const DensityMatrix& declared_density() const { return declared_; }

 private:
  std::vector<Particle> particles_;
  DensityMatrix declared_;
};

// Haar-random pure states: z uniform in [-1, 1], azimuth uniform in [0, 2pi).
Ensemble prepare_uniform_random(std::size_t n, Rng& rng);

// Eigenstates of `basis` in equal proportion. kSampled flips a fair coin per
// particle; kExactHalf emits n/2 of each in shuffled order (n must be even).
Ensemble prepare_mixed(std::size_t n, const Basis& basis, SplitMode mode, Rng& rng);

// (1/N) sum of member projectors, formed through the mean Bloch vector.
DensityMatrix empirical_density(const Ensemble& e);

// Uniformly random sequence holding exactly n/2 of each index.
std::vector<EigenIndex> balanced_sequence(std::size_t n, Rng& rng);

}  // namespace irho
