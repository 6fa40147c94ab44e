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

#include "irho/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "irho/errors.hpp"

namespace irho {
namespace {

// Seed streams under the master seed. Alice's data blocks use stream k.
constexpr std::uint64_t kReferenceStream = 1ULL << 32;
constexpr std::uint64_t kBobStream = 2ULL << 32;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<Particle> particles_of(const BlockRecord& b) { return b.bob_particles.particles(); }

std::size_t count_plus(const std::vector<EigenIndex>& v) {
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), EigenIndex::kPlus));
}

std::string label_string(const BlockRecord& b) {
  std::string out;
  out.reserve(b.bob_particles.size());
  for (const auto& p : b.bob_particles.particles()) {
    const auto& label = counterfactual::read_label(p);
    out.push_back(label.has_basis() && label.eigen_index() == EigenIndex::kMinus ? '-' : '+');
  }
  return out;
}

const Basis& basis_for(const ScenarioConfig& cfg, int bit) { return bit ? cfg.basis1 : cfg.basis0; }

}  // namespace

EigenIndex BlindBlock::measure(std::size_t i, const Basis& basis, Rng& rng) {
  return measure_pure(particles_.at(i), basis, rng).eigen_index;
}

StrategyVerdict ReferenceStrategy::decide(BlindBlock& first, BlindBlock& second, Rng& rng) const {
  auto tally = [&rng](BlindBlock& block, std::size_t from, std::size_t to, const Basis& basis) {
    std::uint64_t plus = 0;
    for (std::size_t i = from; i < to; ++i) plus += block.measure(i, basis, rng) == EigenIndex::kPlus;
    return plus;
  };
  const std::size_t h1 = first.size() / 2;
  const std::size_t h2 = second.size() / 2;
  StrategyVerdict v{0, 1.0};
  if (h1 > 0 && h2 > 0) {
    const auto r = two_proportion_test(tally(first, 0, h1, basis0_), h1, tally(second, 0, h2, basis0_),
                                       h2, alpha_);
    v.statistic = std::min(v.statistic, r.p_value);
  }
  const std::size_t r1 = first.size() - h1;
  const std::size_t r2 = second.size() - h2;
  if (r1 > 0 && r2 > 0) {
    const auto r = two_proportion_test(tally(first, h1, first.size(), basis1_), r1,
                                       tally(second, h2, second.size(), basis1_), r2, alpha_);
    v.statistic = std::min(v.statistic, r.p_value);
  }
  v.bit = v.statistic < alpha_ ? 1 : 0;
  return v;
}

std::string device_name(const BobDevice& d) {
  return std::visit(Overloaded{[](const PhysicalDevice&) { return std::string("physical"); },
                               [](const BasisOracleDevice&) { return std::string("basis-oracle"); },
                               [](const CloneOracleDevice&) { return std::string("clone-oracle"); }},
                    d);
}

void ScenarioConfig::validate() const {
  if (n_per_block == 0) throw DomainError("n_per_block must be at least 1");
  if (message.empty()) throw DomainError("message must not be empty");
  if (message.find_first_not_of("01") != std::string::npos) {
    throw DomainError("message must contain only '0' and '1'");
  }
  if (line_angle(basis0.axis(), basis1.axis()) <= kComposedTol) {
    throw DomainError("basis0 and basis1 must have non-parallel axes");
  }
  if (preparation_mode == SplitMode::kExactHalf && n_per_block % 2 != 0) {
    throw DomainError("exact-half mode needs an even n_per_block");
  }
  if (const auto* p = std::get_if<PhysicalDevice>(&bob_device); p && !p->strategy) {
    throw DomainError("physical device needs a measurement strategy");
  }
  if (const auto* c = std::get_if<CloneOracleDevice>(&bob_device); c && c->m_clones == 0) {
    throw DomainError("m_clones must be at least 1");
  }
}

BlockRecord run_alice_block(std::size_t block_index, int basis_bit, const Basis& basis,
                            std::size_t n, SplitMode mode, Rng& rng) {
  if (n == 0) throw DomainError("run_alice_block: n must be at least 1");
  std::vector<EigenIndex> forced;
  if (mode == SplitMode::kExactHalf) forced = balanced_sequence(n, rng);
  BlockRecord rec;
  rec.block_index = block_index;
  rec.alice_basis_bit = basis_bit;
  rec.alice_basis = basis;
  rec.alice_outcomes.reserve(n);
  std::vector<Particle> bob;
  bob.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EntangledPair pair(TwoQubitState::singlet(), i);
    const Outcome o = mode == SplitMode::kExactHalf ? collapse_first_postselected(pair, basis, forced[i])
                                                    : collapse_first(pair, basis, rng);
    rec.alice_outcomes.push_back(o.eigen_index);
    bob.push_back(pair.remote());
  }
  rec.bob_particles = Ensemble(std::move(bob), DensityMatrix::maximally_mixed());
  return rec;
}

std::vector<BlockRecord> run_alice_blocks(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<BlockRecord> blocks;
  int current = 0;
  std::size_t index = 0;
  auto emit = [&](int bit) {
    Rng rng(Rng::derive(cfg.master_seed, index));
    blocks.push_back(run_alice_block(index, bit, basis_for(cfg, bit), cfg.n_per_block,
                                     cfg.preparation_mode, rng));
    ++index;
  };
  if (cfg.differential) emit(current);
  for (char c : cfg.message) {
    const int bit = c == '1';
    current = cfg.differential ? current ^ bit : bit;
    emit(current);
  }
  return blocks;
}

BlockRecord run_reference_block(const ScenarioConfig& cfg, std::size_t k) {
  Rng rng(Rng::derive(cfg.master_seed, kReferenceStream + k));
  return run_alice_block(k, 0, cfg.basis0, cfg.n_per_block, cfg.preparation_mode, rng);
}

StrategyVerdict bob_physical_decide(const BlockRecord& first, const BlockRecord& second,
                                    const MeasurementStrategy& strategy, Rng& rng) {
  BlindBlock a(particles_of(first));
  BlindBlock b(particles_of(second));
  return strategy.decide(a, b, rng);
}

BlochVector block_preparation_axis(const BlockRecord& block) {
  const auto& particles = block.bob_particles.particles();
  if (particles.empty()) throw ProtocolError("block has no particles");
  std::optional<BlochVector> axis;
  for (const auto& p : particles) {
    const auto& label = counterfactual::read_label(p);
    if (!label.has_basis()) throw UnsupportedInput("basis oracle cannot read uniform-random labels");
    const BlochVector a = label.basis().axis();
    if (!axis) {
      axis = a;
    } else if (line_angle(*axis, a) > kOracleAxisTolerance) {
      throw ProtocolError("block " + std::to_string(block.block_index) + " mixes preparation axes");
    }
  }
  return *axis;
}

int bob_basis_oracle_decide(const BlockRecord& first, const BlockRecord& second) {
  const double angle = line_angle(block_preparation_axis(first), block_preparation_axis(second));
  return angle > kOracleAxisTolerance ? 1 : 0;
}

CloneVerdict bob_clone_oracle_decide(const BlockRecord& block, std::size_t m_clones,
                                     const Basis& reference0, const Basis& reference1, Rng& rng) {
  if (m_clones == 0) throw DomainError("bob_clone_oracle_decide: m_clones must be at least 1");
  if (block.bob_particles.size() == 0) throw DomainError("bob_clone_oracle_decide: empty block");
  const auto& axes = tomography_bases();
  CloneVerdict v;
  v.margins.reserve(block.bob_particles.size());
  for (const auto& particle : block.bob_particles.particles()) {
    const PureState s = counterfactual::clone_state(particle);
    const double p[3] = {axes[0].plus_probability(s), axes[1].plus_probability(s),
                         axes[2].plus_probability(s)};
    std::size_t plus[3] = {0, 0, 0};
    std::size_t total[3] = {0, 0, 0};
    const std::size_t offset = rng.index(3);
    for (std::size_t j = 0; j < m_clones; ++j) {
      const std::size_t a = (offset + j) % 3;
      ++total[a];
      plus[a] += rng.uniform() < p[a] ? 1 : 0;
    }
    double r[3];
    for (std::size_t a = 0; a < 3; ++a) {
      r[a] = total[a] ? (2.0 * static_cast<double>(plus[a]) - static_cast<double>(total[a])) /
                            static_cast<double>(total[a])
                      : 0.0;
    }
    const BlochVector est{r[0], r[1], r[2]};
    const double margin = std::abs(est.dot(reference1.axis())) - std::abs(est.dot(reference0.axis()));
    v.margins.push_back(margin);
    if (margin > 0) ++v.votes1;
    if (margin < 0) ++v.votes0;
  }
  if (v.votes1 != v.votes0) {
    v.bit = v.votes1 > v.votes0 ? 1 : 0;
  } else {
    v.bit = rng.coin() ? 1 : 0;
  }
  return v;
}

ChannelReport run_channel(const ScenarioConfig& cfg) {
  const std::vector<BlockRecord> blocks = run_alice_blocks(cfg);
  const bool oracle = !std::holds_alternative<PhysicalDevice>(cfg.bob_device);

  ChannelReport report;
  report.sent_message = cfg.message;
  report.device_mode = device_name(cfg.bob_device);

  std::vector<BlockSummary> rows(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    rows[i].block_index = blocks[i].block_index;
    rows[i].alice_basis_bit = blocks[i].alice_basis_bit;
    rows[i].alice_plus = count_plus(blocks[i].alice_outcomes);
    if (oracle) rows[i].labels = label_string(blocks[i]);
  }
  const std::size_t first_data = cfg.differential ? 1 : 0;
  for (std::size_t k = 0; k < cfg.message.size(); ++k) {
    rows[first_data + k].sent_bit = cfg.message[k] == '1';
  }

  if (cfg.differential) {
    // Bob keeps each block's particles between the two comparisons it is in.
    std::vector<BlindBlock> blind;
    std::vector<int> clone_class;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      Rng rng(Rng::derive(cfg.master_seed, kBobStream + i));
      std::visit(Overloaded{
                     [&](const PhysicalDevice&) { blind.emplace_back(particles_of(blocks[i])); },
                     [&](const BasisOracleDevice&) {},
                     [&](const CloneOracleDevice& c) {
                       const auto v = bob_clone_oracle_decide(blocks[i], c.m_clones, cfg.basis0,
                                                              cfg.basis1, rng);
                       clone_class.push_back(v.bit);
                       double mean = 0;
                       for (double m : v.margins) mean += m;
                       rows[i].statistic = mean / static_cast<double>(v.margins.size());
                     }},
                 cfg.bob_device);
    }
    for (std::size_t i = 1; i < blocks.size(); ++i) {
      Rng rng(Rng::derive(cfg.master_seed, kBobStream + blocks.size() + i));
      std::visit(Overloaded{[&](const PhysicalDevice& d) {
                              const auto v = d.strategy->decide(blind[i - 1], blind[i], rng);
                              rows[i].decoded_bit = v.bit;
                              rows[i].statistic = v.statistic;
                            },
                            [&](const BasisOracleDevice&) {
                              rows[i].decoded_bit = bob_basis_oracle_decide(blocks[i - 1], blocks[i]);
                            },
                            [&](const CloneOracleDevice&) {
                              rows[i].decoded_bit = clone_class[i] != clone_class[i - 1] ? 1 : 0;
                            }},
                 cfg.bob_device);
    }
  } else {
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      Rng rng(Rng::derive(cfg.master_seed, kBobStream + k));
      std::visit(Overloaded{[&](const PhysicalDevice& d) {
                              const auto v = bob_physical_decide(run_reference_block(cfg, k),
                                                                 blocks[k], *d.strategy, rng);
                              rows[k].decoded_bit = v.bit;
                              rows[k].statistic = v.statistic;
                            },
                            [&](const BasisOracleDevice&) {
                              rows[k].decoded_bit =
                                  bob_basis_oracle_decide(run_reference_block(cfg, k), blocks[k]);
                            },
                            [&](const CloneOracleDevice& c) {
                              const auto v = bob_clone_oracle_decide(blocks[k], c.m_clones,
                                                                     cfg.basis0, cfg.basis1, rng);
                              rows[k].decoded_bit = v.bit;
                              double mean = 0;
                              for (double m : v.margins) mean += m;
                              rows[k].statistic = mean / static_cast<double>(v.margins.size());
                            }},
                 cfg.bob_device);
    }
  }

  std::size_t errors = 0;
  for (const auto& row : rows) {
    if (!row.sent_bit) continue;
    const int decoded = row.decoded_bit.value_or(0);
    report.decoded_message.push_back(decoded ? '1' : '0');
    errors += decoded != *row.sent_bit;
  }
  report.bit_error_rate = static_cast<double>(errors) / static_cast<double>(cfg.message.size());
  report.blocks = std::move(rows);
  return report;
}

double physical_distinguishing_accuracy(const TrialSpec& spec, const MeasurementStrategy& strategy) {
  if (spec.trials == 0) throw DomainError("physical_distinguishing_accuracy: no trials");
  std::size_t correct = 0;
  for (std::size_t t = 0; t < spec.trials; ++t) {
    Rng rng(Rng::derive(spec.seed, t));
    const int truth = rng.coin() ? 1 : 0;
    const BlockRecord a = run_alice_block(0, 0, spec.basis0, spec.n_per_block, spec.mode, rng);
    const BlockRecord b = run_alice_block(1, truth, truth ? spec.basis1 : spec.basis0,
                                          spec.n_per_block, spec.mode, rng);
    correct += bob_physical_decide(a, b, strategy, rng).bit == truth;
  }
  return static_cast<double>(correct) / static_cast<double>(spec.trials);
}

double clone_oracle_accuracy(const TrialSpec& spec, std::size_t m_clones) {
  if (spec.trials == 0) throw DomainError("clone_oracle_accuracy: no trials");
  std::size_t correct = 0;
  for (std::size_t t = 0; t < spec.trials; ++t) {
    Rng rng(Rng::derive(spec.seed, t));
    const int truth = rng.coin() ? 1 : 0;
    const BlockRecord b = run_alice_block(0, truth, truth ? spec.basis1 : spec.basis0,
                                          spec.n_per_block, spec.mode, rng);
    correct += bob_clone_oracle_decide(b, m_clones, spec.basis0, spec.basis1, rng).bit == truth;
  }
  return static_cast<double>(correct) / static_cast<double>(spec.trials);
}

DensityMatrix expected_bob_density(const Basis& alice_basis) {
  const auto p = joint_probabilities(TwoQubitState::singlet(), alice_basis, alice_basis);
  const double plus = p[0] + p[1];
  // A plus outcome for Alice leaves Bob with the minus eigenstate and vice versa.
  return mix({{plus, alice_basis.minus()}, {1.0 - plus, alice_basis.plus()}});
}

TestResult pooled_nosignal_test(std::size_t n_per_arm, const Basis& basis0, const Basis& basis1,
                                const Basis& bob_basis, Rng& rng) {
  std::uint64_t plus[2] = {0, 0};
  for (int arm = 0; arm < 2; ++arm) {
    const Basis& alice = arm ? basis1 : basis0;
    for (std::size_t i = 0; i < n_per_arm; ++i) {
      EntangledPair pair(TwoQubitState::singlet(), i);
      collapse_first(pair, alice, rng);
      plus[arm] += measure_second(pair, bob_basis, rng).eigen_index == EigenIndex::kPlus;
    }
  }
  return two_proportion_test(plus[0], n_per_arm, plus[1], n_per_arm);
}

std::vector<double> null_calibration_pvalues(std::size_t n, std::size_t runs, const Basis& basis,
                                             const Basis& bob_basis, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng(Rng::derive(seed, r));
    std::uint64_t plus[2] = {0, 0};
    for (int arm = 0; arm < 2; ++arm) {
      BlindBlock block(particles_of(run_alice_block(arm, 0, basis, n, SplitMode::kSampled, rng)));
      for (std::size_t i = 0; i < n; ++i) plus[arm] += block.measure(i, bob_basis, rng) == EigenIndex::kPlus;
    }
    out.push_back(two_proportion_test(plus[0], n, plus[1], n).p_value);
  }
  return out;
}

}  // namespace irho
