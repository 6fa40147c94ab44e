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

#include "irho/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "irho/errors.hpp"

namespace irho {
namespace {

Complex project(const TwoQubitState& psi, const PureState& a, const PureState& b) {
  const Complex ca[2] = {std::conj(a.amp_up()), std::conj(a.amp_down())};
  const Complex cb[2] = {std::conj(b.amp_up()), std::conj(b.amp_down())};
  Complex sum = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) sum += ca[i] * cb[j] * psi.amp(i, j);
  }
  return sum;
}

// <plus| rho_A |plus> for the first particle.
double first_plus_probability(const TwoQubitState& psi, const Basis& basis) {
  const DensityMatrix rho = partial_trace_first_kept(psi);
  const Complex v[2] = {basis.plus().amp_up(), basis.plus().amp_down()};
  Complex s = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) s += std::conj(v[i]) * rho(i, j) * v[j];
  }
  return std::clamp(s.real(), 0.0, 1.0);
}

EigenIndex draw(double plus_probability, Rng& rng) {
  return rng.uniform() < plus_probability ? EigenIndex::kPlus : EigenIndex::kMinus;
}

}  // namespace

Outcome measure_pure(Particle& p, const Basis& basis, Rng& rng) {
  const EigenIndex e = draw(basis.plus_probability(p.state()), rng);
  p.collapse_to(basis, e);
  return {e, basis.eigenstate(e)};
}

JointDistribution joint_probabilities(const TwoQubitState& psi, const Basis& basis_a,
                                      const Basis& basis_b) {
  JointDistribution p{};
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const auto ea = a == 0 ? EigenIndex::kPlus : EigenIndex::kMinus;
      const auto eb = b == 0 ? EigenIndex::kPlus : EigenIndex::kMinus;
      p[2 * a + b] = std::norm(project(psi, basis_a.eigenstate(ea), basis_b.eigenstate(eb)));
    }
  }
  return p;
}

bool is_singlet(const TwoQubitState& psi) {
  const auto& s = TwoQubitState::singlet().amps();
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(s[i]) * psi.amps()[i];
  return std::abs(std::abs(overlap) - 1.0) <= kComposedTol;
}

JointDistribution sequential_probabilities(const TwoQubitState& psi, const Basis& basis_a,
                                           const Basis& basis_b) {
  if (!is_singlet(psi)) throw UnsupportedInput("sequential collapse is defined for the singlet only");
  const double pa = first_plus_probability(psi, basis_a);
  JointDistribution p{};
  for (std::size_t a = 0; a < 2; ++a) {
    const auto ea = a == 0 ? EigenIndex::kPlus : EigenIndex::kMinus;
    const PureState& partner = basis_a.eigenstate(opposite(ea));
    const double q = basis_b.plus_probability(partner);
    const double weight = a == 0 ? pa : 1.0 - pa;
    p[2 * a] = weight * q;
    p[2 * a + 1] = weight * (1.0 - q);
  }
  return p;
}

const Particle& EntangledPair::remote() const {
  if (status_ == Status::kIntact) throw StateError("EntangledPair: partner is not collapsed yet");
  return *remote_;
}

const Basis& EntangledPair::first_basis() const {
  if (status_ == Status::kIntact) throw StateError("EntangledPair: first particle not measured");
  return *first_basis_;
}

EigenIndex EntangledPair::first_outcome() const {
  if (status_ == Status::kIntact) throw StateError("EntangledPair: first particle not measured");
  return first_outcome_;
}

Outcome EntangledPair::collapse_as(const Basis& basis, EigenIndex outcome) {
  const EigenIndex partner = opposite(outcome);
  remote_.emplace(basis.eigenstate(partner),
                  PreparationLabel::eigenstate(basis, partner, sequence_no_));
  first_basis_.emplace(basis);
  first_outcome_ = outcome;
  status_ = Status::kCollapsed;
  return {outcome, basis.eigenstate(outcome)};
}

namespace {

void require_collapsible(const EntangledPair& pair) {
  if (pair.status() != EntangledPair::Status::kIntact) {
    throw StateError("collapse_first: pair already collapsed");
  }
  if (!is_singlet(pair.joint())) throw UnsupportedInput("collapse_first: singlet pairs only");
}

}  // namespace

Outcome collapse_first(EntangledPair& pair, const Basis& basis, Rng& rng) {
  require_collapsible(pair);
  const double p = first_plus_probability(pair.joint(), basis);
  return pair.collapse_as(basis, draw(p, rng));
}

Outcome collapse_first_postselected(EntangledPair& pair, const Basis& basis, EigenIndex outcome) {
  require_collapsible(pair);
  const double p = first_plus_probability(pair.joint(), basis);
  if ((outcome == EigenIndex::kPlus ? p : 1.0 - p) <= 0.0) {
    throw DomainError("collapse_first_postselected: outcome has zero probability");
  }
  return pair.collapse_as(basis, outcome);
}

Outcome measure_second(EntangledPair& pair, const Basis& basis, Rng& rng) {
  if (pair.status_ == EntangledPair::Status::kIntact) {
    throw StateError("measure_second: the first particle must be measured first");
  }
  if (pair.status_ == EntangledPair::Status::kBothMeasured) {
    throw StateError("measure_second: partner already measured");
  }
  const Outcome out = measure_pure(*pair.remote_, basis, rng);
  pair.status_ = EntangledPair::Status::kBothMeasured;
  return out;
}

}  // namespace irho
