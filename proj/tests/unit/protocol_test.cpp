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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "irho/errors.hpp"

namespace irho {
namespace {

constexpr double kPi = std::numbers::pi;

ScenarioConfig make_config(const std::string& message, std::size_t n, BobDevice device,
                           std::uint64_t seed = 7) {
  ScenarioConfig cfg;
  cfg.message = message;
  cfg.n_per_block = n;
  cfg.bob_device = std::move(device);
  cfg.master_seed = seed;
  return cfg;
}

PhysicalDevice reference_device(const ScenarioConfig& cfg) {
  return PhysicalDevice{std::make_shared<ReferenceStrategy>(cfg.basis0, cfg.basis1)};
}

BlockRecord block_from(std::vector<Particle> ps) {
  BlockRecord b;
  b.bob_particles = Ensemble(std::move(ps), DensityMatrix::maximally_mixed());
  return b;
}

TEST(ScenarioConfig, Validation) {
  ScenarioConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  auto bad = cfg;
  bad.n_per_block = 0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = cfg;
  bad.message = "";
  EXPECT_THROW(bad.validate(), DomainError);
  bad = cfg;
  bad.message = "012";
  EXPECT_THROW(bad.validate(), DomainError);
  bad = cfg;
  bad.basis1 = basis_from_axis(kPi, 0);  // antiparallel to basis0: same measurement axis
  EXPECT_THROW(bad.validate(), DomainError);
  bad = cfg;
  bad.preparation_mode = SplitMode::kExactHalf;
  bad.n_per_block = 3;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = cfg;
  bad.bob_device = PhysicalDevice{};
  EXPECT_THROW(bad.validate(), DomainError);
  bad = cfg;
  bad.bob_device = CloneOracleDevice{0};
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(RunAliceBlocks, OneBlockPerBitWithMatchingLabels) {
  const auto blocks = run_alice_blocks(make_config("01", 4, BasisOracleDevice{}));
  ASSERT_EQ(blocks.size(), 2u);
  const ScenarioConfig cfg;
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(blocks[k].alice_outcomes.size(), 4u);
    EXPECT_EQ(blocks[k].alice_basis_bit, static_cast<int>(k));
    const Basis& want = k == 0 ? cfg.basis0 : cfg.basis1;
    for (const auto& p : blocks[k].bob_particles.particles()) {
      EXPECT_NEAR(line_angle(counterfactual::read_label(p).basis().axis(), want.axis()), 0, kExactTol);
    }
  }
}

TEST(RunAliceBlocks, BobBlockIsMaximallyMixed) {
  const std::size_t n = 4000;
  const auto blocks = run_alice_blocks(make_config("01", n, BasisOracleDevice{}));
  for (const auto& b : blocks) {
    EXPECT_LE(trace_distance(empirical_density(b.bob_particles), DensityMatrix::maximally_mixed()),
              5 / std::sqrt(double(n)));
    EXPECT_LE(max_entry_difference(b.bob_particles.declared_density(), DensityMatrix::maximally_mixed()),
              kExactTol);
  }
}

TEST(RunAliceBlocks, ExactHalfGivesExactlyMixedBlocks) {
  auto cfg = make_config("0110", 10, BasisOracleDevice{});
  cfg.preparation_mode = SplitMode::kExactHalf;
  for (const auto& b : run_alice_blocks(cfg)) {
    EXPECT_EQ(std::count(b.alice_outcomes.begin(), b.alice_outcomes.end(), EigenIndex::kPlus), 5);
    EXPECT_LE(max_entry_difference(empirical_density(b.bob_particles), DensityMatrix::maximally_mixed()),
              kExactTol);
  }
}

TEST(RunAliceBlocks, SinglePairPartnerIsOpposite) {
  const auto blocks = run_alice_blocks(make_config("0", 1, BasisOracleDevice{}));
  ASSERT_EQ(blocks.size(), 1u);
  ASSERT_EQ(blocks[0].bob_particles.size(), 1u);
  const auto a = blocks[0].alice_outcomes[0];
  EXPECT_TRUE(states_equal_up_to_phase(blocks[0].bob_particles.particles()[0].state(),
                                       bases::up_down().eigenstate(opposite(a))));
}

TEST(RunAliceBlocks, DifferentialPrependsReferenceAndChainsBases) {
  auto cfg = make_config("1101", 2, BasisOracleDevice{});
  cfg.differential = true;
  const auto blocks = run_alice_blocks(cfg);
  ASSERT_EQ(blocks.size(), 5u);
  const int want[5] = {0, 1, 0, 0, 1};
  for (int k = 0; k < 5; ++k) EXPECT_EQ(blocks[k].alice_basis_bit, want[k]);
}

TEST(RunAliceBlocks, Deterministic) {
  const auto cfg = make_config("0110", 16, BasisOracleDevice{}, 99);
  const auto a = run_alice_blocks(cfg);
  const auto b = run_alice_blocks(cfg);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].alice_outcomes, b[k].alice_outcomes);
}

TEST(BasisOracle, DistinguishesConjugateBases) {
  Rng rng(1);
  const auto ud = run_alice_block(0, 0, bases::up_down(), 5, SplitMode::kSampled, rng);
  const auto ud2 = run_alice_block(1, 0, bases::up_down(), 5, SplitMode::kSampled, rng);
  const auto rl = run_alice_block(2, 1, bases::right_left(), 5, SplitMode::kSampled, rng);
  EXPECT_EQ(bob_basis_oracle_decide(ud, rl), 1);
  EXPECT_EQ(bob_basis_oracle_decide(ud, ud2), 0);
}

TEST(BasisOracle, SingleParticleBlocksAreExact) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto a = run_alice_block(0, 0, bases::up_down(), 1, SplitMode::kSampled, rng);
    const auto b = run_alice_block(1, 1, bases::in_out(), 1, SplitMode::kSampled, rng);
    const auto c = run_alice_block(2, 0, bases::up_down(), 1, SplitMode::kSampled, rng);
    EXPECT_EQ(bob_basis_oracle_decide(a, b), 1);
    EXPECT_EQ(bob_basis_oracle_decide(a, c), 0);
  }
}

TEST(BasisOracle, MalformedBlocks) {
  std::vector<Particle> mixed;
  mixed.emplace_back(PureState::up(), PreparationLabel::eigenstate(bases::up_down(), EigenIndex::kPlus, 0));
  mixed.emplace_back(bases::in_out().plus(), PreparationLabel::eigenstate(bases::in_out(), EigenIndex::kPlus, 1));
  const auto bad = block_from(std::move(mixed));
  Rng rng(3);
  const auto good = run_alice_block(0, 0, bases::up_down(), 2, SplitMode::kSampled, rng);
  EXPECT_THROW(bob_basis_oracle_decide(good, bad), ProtocolError);

  const auto haar = block_from(prepare_uniform_random(3, rng).particles());
  EXPECT_THROW(bob_basis_oracle_decide(good, haar), UnsupportedInput);
  EXPECT_THROW(block_preparation_axis(block_from({})), ProtocolError);
}

TEST(BasisOracle, SignOfAxisIgnored) {
  std::vector<Particle> a, b;
  a.emplace_back(PureState::up(), PreparationLabel::eigenstate(bases::up_down(), EigenIndex::kPlus, 0));
  const Basis flipped(PureState::down(), PureState::up());
  b.emplace_back(PureState::up(), PreparationLabel::eigenstate(flipped, EigenIndex::kMinus, 0));
  EXPECT_EQ(bob_basis_oracle_decide(block_from(std::move(a)), block_from(std::move(b))), 0);
}

TEST(PhysicalDevice, ReferenceStrategyAtChanceLevel) {
  TrialSpec spec;
  spec.n_per_block = 40;
  spec.trials = 3000;
  spec.seed = 11;
  const ReferenceStrategy strategy(spec.basis0, spec.basis1);
  const double acc = physical_distinguishing_accuracy(spec, strategy);
  // sd = sqrt(0.25 / 3000) ~ 0.009
  EXPECT_NEAR(acc, 0.5, 0.04);
}

TEST(PhysicalDevice, VerdictsDoNotDependOnCase) {
  const ReferenceStrategy strategy(bases::up_down(), bases::right_left());
  std::uint64_t ones[2] = {0, 0};
  const std::uint64_t trials = 2000;
  for (int diff = 0; diff < 2; ++diff) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng rng(Rng::derive(500 + diff, t));
      const auto a = run_alice_block(0, 0, bases::up_down(), 30, SplitMode::kSampled, rng);
      const auto b = run_alice_block(1, diff, diff ? bases::right_left() : bases::up_down(), 30,
                                     SplitMode::kSampled, rng);
      ones[diff] += bob_physical_decide(a, b, strategy, rng).bit;
    }
  }
  EXPECT_GT(two_proportion_test(ones[0], trials, ones[1], trials).p_value, 0.01);
}

TEST(PhysicalDevice, ConstantStrategyIsExactlyHalfOnBalancedCases) {
  const ConstantStrategy always_one(1);
  Rng rng(4);
  int correct = 0;
  for (int diff = 0; diff < 2; ++diff) {
    for (int t = 0; t < 500; ++t) {
      const auto a = run_alice_block(0, 0, bases::up_down(), 4, SplitMode::kSampled, rng);
      const auto b = run_alice_block(1, diff, diff ? bases::right_left() : bases::up_down(), 4,
                                     SplitMode::kSampled, rng);
      correct += bob_physical_decide(a, b, always_one, rng).bit == diff;
    }
  }
  EXPECT_EQ(correct, 500);
}

TEST(PhysicalDevice, ReferenceStrategyHandlesSingleParticleBlocks) {
  Rng rng(5);
  const auto a = run_alice_block(0, 0, bases::up_down(), 1, SplitMode::kSampled, rng);
  const auto b = run_alice_block(1, 1, bases::right_left(), 1, SplitMode::kSampled, rng);
  const ReferenceStrategy s(bases::up_down(), bases::right_left());
  const auto v = bob_physical_decide(a, b, s, rng);
  EXPECT_TRUE(v.bit == 0 || v.bit == 1);
  EXPECT_GE(v.statistic, 0.0);
  EXPECT_LE(v.statistic, 1.0);
}

// A strategy that "sees" the preparation basis would need labels; the only
// handle a strategy gets is BlindBlock::measure. Repeated measurement of the
// same particle is allowed and returns the collapsed outcome.
class RepeatStrategy final : public MeasurementStrategy {
 public:
  StrategyVerdict decide(BlindBlock& first, BlindBlock&, Rng& rng) const override {
    const auto a = first.measure(0, bases::in_out(), rng);
    for (int i = 0; i < 10; ++i) {
      if (first.measure(0, bases::in_out(), rng) != a) return {1, 0.0};
    }
    return {0, 1.0};
  }
  std::string name() const override { return "repeat"; }
};

TEST(PhysicalDevice, RepeatedMeasurementIsStable) {
  Rng rng(6);
  const auto a = run_alice_block(0, 0, bases::up_down(), 3, SplitMode::kSampled, rng);
  EXPECT_EQ(bob_physical_decide(a, a, RepeatStrategy{}, rng).bit, 0);
}

TEST(CloneOracle, ManyClonesClassifyUpReliably) {
  std::vector<Particle> one;
  one.emplace_back(PureState::up(), PreparationLabel::eigenstate(bases::up_down(), EigenIndex::kPlus, 0));
  const auto block = block_from(std::move(one));
  Rng rng(7);
  int basis0 = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto v = bob_clone_oracle_decide(block, 10000, bases::up_down(), bases::right_left(), rng);
    basis0 += v.bit == 0;
    EXPECT_EQ(v.margins.size(), 1u);
  }
  EXPECT_GE(basis0, 999);
}

TEST(CloneOracle, MarginsReflectClassification) {
  Rng rng(8);
  const auto block = run_alice_block(0, 1, bases::right_left(), 16, SplitMode::kSampled, rng);
  const auto v = bob_clone_oracle_decide(block, 10000, bases::up_down(), bases::right_left(), rng);
  EXPECT_EQ(v.bit, 1);
  EXPECT_EQ(v.votes1, 16u);
  for (double m : v.margins) EXPECT_GT(m, 0.9);
}

TEST(CloneOracle, SingleCloneIsAtChance) {
  TrialSpec spec;
  spec.n_per_block = 16;
  spec.trials = 10000;
  spec.seed = 12;
  EXPECT_NEAR(clone_oracle_accuracy(spec, 1), 0.5, 0.03);
}

TEST(CloneOracle, ManyClonesAreAccurate) {
  TrialSpec spec;
  spec.n_per_block = 16;
  spec.trials = 100;
  spec.seed = 13;
  EXPECT_GE(clone_oracle_accuracy(spec, 10000), 0.99);
}

TEST(CloneOracle, RejectsBadInput) {
  Rng rng(9);
  const auto block = run_alice_block(0, 0, bases::up_down(), 2, SplitMode::kSampled, rng);
  EXPECT_THROW(bob_clone_oracle_decide(block, 0, bases::up_down(), bases::right_left(), rng), DomainError);
  EXPECT_THROW(bob_clone_oracle_decide(block_from({}), 5, bases::up_down(), bases::right_left(), rng),
               DomainError);
}

TEST(RunChannel, BasisOracleDecodesExactly) {
  const auto report = run_channel(make_config("1011", 8, BasisOracleDevice{}));
  EXPECT_EQ(report.decoded_message, "1011");
  EXPECT_EQ(report.bit_error_rate, 0.0);
  EXPECT_EQ(report.device_mode, "basis-oracle");
  ASSERT_EQ(report.blocks.size(), 4u);
  for (const auto& b : report.blocks) EXPECT_EQ(b.labels.size(), 8u);
}

TEST(RunChannel, PhysicalReportHidesLabels) {
  auto cfg = make_config("10", 8, BasisOracleDevice{});
  cfg.bob_device = reference_device(cfg);
  const auto report = run_channel(cfg);
  for (const auto& b : report.blocks) EXPECT_TRUE(b.labels.empty());
}

TEST(RunChannel, CloneOracleDecodesWell) {
  std::string msg;
  for (int i = 0; i < 50; ++i) msg.push_back("0110100"[i % 7]);
  const auto report = run_channel(make_config(msg, 16, CloneOracleDevice{10000}));
  EXPECT_LE(report.bit_error_rate, 0.02);
}

TEST(RunChannel, DifferentialModeDecodes) {
  for (BobDevice d : {BobDevice{BasisOracleDevice{}}, BobDevice{CloneOracleDevice{2000}}}) {
    auto cfg = make_config("1100101", 8, d);
    cfg.differential = true;
    const auto report = run_channel(cfg);
    EXPECT_EQ(report.decoded_message, "1100101") << report.device_mode;
    EXPECT_EQ(report.blocks.size(), 8u);
    EXPECT_FALSE(report.blocks[0].sent_bit.has_value());
  }
}

TEST(RunChannel, DifferentialPhysicalRuns) {
  auto cfg = make_config("1100101011", 20, BasisOracleDevice{});
  cfg.differential = true;
  cfg.bob_device = reference_device(cfg);
  const auto report = run_channel(cfg);
  EXPECT_EQ(report.decoded_message.size(), 10u);
}

TEST(RunChannel, OracleSeparationWithSameSeed) {
  std::string msg;
  for (int i = 0; i < 100; ++i) msg.push_back(i % 2 ? '1' : '0');
  auto cfg = make_config(msg, 50, BasisOracleDevice{}, 31);
  const auto oracle = run_channel(cfg);
  cfg.bob_device = reference_device(cfg);
  const auto physical = run_channel(cfg);
  EXPECT_EQ(oracle.bit_error_rate, 0.0);
  EXPECT_GT(physical.bit_error_rate, 0.3);
  EXPECT_LT(physical.bit_error_rate, 0.7);
  // Alice's side is identical in both runs.
  for (std::size_t k = 0; k < msg.size(); ++k) {
    EXPECT_EQ(oracle.blocks[k].alice_plus, physical.blocks[k].alice_plus);
  }
}

TEST(RunChannel, Deterministic) {
  auto cfg = make_config("0110", 30, BasisOracleDevice{}, 5);
  cfg.bob_device = reference_device(cfg);
  const auto a = run_channel(cfg);
  const auto b = run_channel(cfg);
  EXPECT_EQ(a.decoded_message, b.decoded_message);
  for (std::size_t k = 0; k < a.blocks.size(); ++k) {
    EXPECT_EQ(a.blocks[k].statistic, b.blocks[k].statistic);
    EXPECT_EQ(a.blocks[k].alice_plus, b.blocks[k].alice_plus);
  }
}

TEST(RunChannel, BitErrorRateIsHammingFraction) {
  auto cfg = make_config("1111", 4, BasisOracleDevice{});
  cfg.bob_device = PhysicalDevice{std::make_shared<ConstantStrategy>(0)};
  const auto report = run_channel(cfg);
  EXPECT_EQ(report.decoded_message, "0000");
  EXPECT_EQ(report.bit_error_rate, 1.0);
}

TEST(NoSignalling, ExpectedBobDensityIndependentOfAliceBasis) {
  Rng rng(10);
  for (int i = 0; i < 500; ++i) {
    const Basis a = basis_from_axis(std::acos(2 * rng.uniform() - 1), 2 * kPi * rng.uniform());
    const Basis b = basis_from_axis(std::acos(2 * rng.uniform() - 1), 2 * kPi * rng.uniform());
    EXPECT_LE(trace_distance(expected_bob_density(a), expected_bob_density(b)), kExactTol);
  }
}

TEST(NoSignalling, PooledOutcomesIndependentOfAliceBasis) {
  const int runs = 200;
  int passing = 0;
  for (int r = 0; r < runs; ++r) {
    Rng rng(Rng::derive(77, r));
    const Basis& bob = r % 2 ? bases::up_down() : bases::right_left();
    passing += pooled_nosignal_test(10000, bases::up_down(), bases::right_left(), bob, rng).p_value > 1e-3;
  }
  EXPECT_GE(passing, runs * 99 / 100);
}

}  // namespace
}  // namespace irho
