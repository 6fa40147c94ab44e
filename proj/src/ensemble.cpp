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

#include "irho/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "irho/errors.hpp"

namespace irho {

namespace counterfactual {

const PreparationLabel& read_label(const Particle& p) { return p.label_; }

PureState clone_state(const Particle& p) { return p.state_; }

}  // namespace counterfactual

Particle::Particle(PureState state, PreparationLabel label)
    : state_(state), label_(std::move(label)) {
  if (label_.has_basis() &&
      !states_equal_up_to_phase(state_, label_.basis().eigenstate(label_.eigen_index()))) {
    throw DomainError("Particle: state does not match its preparation label");
  }
}

void Particle::collapse_to(const Basis& basis, EigenIndex index) {
  state_ = basis.eigenstate(index);
  label_ = PreparationLabel::eigenstate(basis, index, label_.sequence_no());
}

Ensemble::Ensemble(std::vector<Particle> particles, DensityMatrix declared_density)
    : particles_(std::move(particles)), declared_(declared_density) {}

Ensemble prepare_uniform_random(std::size_t n, Rng& rng) {
  if (n == 0) throw DomainError("prepare_uniform_random: n must be at least 1");
  std::vector<Particle> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    out.emplace_back(PureState::from_angles(std::acos(z), phi),
                     PreparationLabel::uniform_random(i));
  }
  return Ensemble(std::move(out), DensityMatrix::maximally_mixed());
}

std::vector<EigenIndex> balanced_sequence(std::size_t n, Rng& rng) {
  if (n % 2 != 0) throw DomainError("balanced_sequence: n must be even");
  std::vector<EigenIndex> seq(n, EigenIndex::kPlus);
  for (std::size_t i = n / 2; i < n; ++i) seq[i] = EigenIndex::kMinus;
  for (std::size_t i = n; i > 1; --i) std::swap(seq[i - 1], seq[rng.index(i)]);
  return seq;
}

Ensemble prepare_mixed(std::size_t n, const Basis& basis, SplitMode mode, Rng& rng) {
  if (n == 0) throw DomainError("prepare_mixed: n must be at least 1");
  std::vector<EigenIndex> indices;
  if (mode == SplitMode::kExactHalf) {
    if (n % 2 != 0) throw DomainError("prepare_mixed: exact-half mode needs an even n");
    indices = balanced_sequence(n, rng);
  } else {
    indices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      indices.push_back(rng.uniform() < 0.5 ? EigenIndex::kPlus : EigenIndex::kMinus);
    }
  }
  std::vector<Particle> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace_back(basis.eigenstate(indices[i]), PreparationLabel::eigenstate(basis, indices[i], i));
  }
  return Ensemble(std::move(out), DensityMatrix::maximally_mixed());
}

DensityMatrix empirical_density(const Ensemble& e) {
  if (e.size() == 0) throw DomainError("empirical_density: empty ensemble");
  BlochVector sum;
  for (const auto& p : e.particles()) sum = sum + bloch_of(p.state());
  return density_from_bloch(sum * (1.0 / static_cast<double>(e.size())));
}

}  // namespace irho
