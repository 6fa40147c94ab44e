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

// Three-party scenario: a singlet source, Alice choosing the collapse basis
// per block of N pairs, and Bob trying to read that choice from his halves.
// Bob is either physical (measurement outcomes only) or one of two
// counterfactual devices that read what physics hides.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "irho/ensemble.hpp"
#include "irho/measurement.hpp"
#include "irho/qstate.hpp"
#include "irho/rng.hpp"
#include "irho/stats.hpp"

namespace irho {

// Bob's view of a block: he may measure particle i in any basis, as often
// as he likes, and sees only the outcomes.
class BlindBlock {
 public:
  explicit BlindBlock(std::vector<Particle> particles) : particles_(std::move(particles)) {}
  std::size_t size() const { return particles_.size(); }
  EigenIndex measure(std::size_t i, const Basis& basis, Rng& rng);

 private:
  std::vector<Particle> particles_;
};

struct StrategyVerdict {
  int bit = 0;  // 1 = "the two blocks were prepared in different bases"
  double statistic = 1.0;
};

// A physical distinguishing strategy. Adaptive rules are allowed: the
// strategy drives the measurements itself.
class MeasurementStrategy {
 public:
  virtual ~MeasurementStrategy() = default;
  virtual StrategyVerdict decide(BlindBlock& first, BlindBlock& second, Rng& rng) const = 0;
  virtual std::string name() const = 0;
};

// Measures the first half of each block in basis0 and the rest in basis1,
// then compares plus-fractions between blocks with a two-proportion test
// per basis. Reports "different" when either test rejects at alpha.
// The statistic is the smaller p-value.
class ReferenceStrategy final : public MeasurementStrategy {
 public:
  ReferenceStrategy(Basis basis0, Basis basis1, double alpha = 0.05)
      : basis0_(std::move(basis0)), basis1_(std::move(basis1)), alpha_(alpha) {}
  StrategyVerdict decide(BlindBlock& first, BlindBlock& second, Rng& rng) const override;
  std::string name() const override { return "reference"; }

 private:
  Basis basis0_;
  Basis basis1_;
  double alpha_;
};

// Ignores the particles.
class ConstantStrategy final : public MeasurementStrategy {
 public:
  explicit ConstantStrategy(int bit) : bit_(bit) {}
  StrategyVerdict decide(BlindBlock&, BlindBlock&, Rng&) const override { return {bit_, 1.0}; }
  std::string name() const override { return "constant-" + std::to_string(bit_); }

 private:
  int bit_;
};

struct PhysicalDevice {
  std::shared_ptr<const MeasurementStrategy> strategy;
};
struct BasisOracleDevice {};
struct CloneOracleDevice {
  std::size_t m_clones = 1;
};
using BobDevice = std::variant<PhysicalDevice, BasisOracleDevice, CloneOracleDevice>;

std::string device_name(const BobDevice& d);

struct ScenarioConfig {
  std::size_t n_per_block = 1;
  std::string message = "0";  // characters '0' / '1'
  Basis basis0 = bases::up_down();
  Basis basis1 = bases::right_left();
  BobDevice bob_device = BasisOracleDevice{};
  std::uint64_t master_seed = 0;
  SplitMode preparation_mode = SplitMode::kSampled;
  // Bit k flips the basis relative to block k-1 (a leading reference block
  // in basis0 is sent first) instead of naming the basis directly.
  bool differential = false;

  // DomainError describing the first violated constraint.
  void validate() const;
};

struct BlockRecord {
  std::size_t block_index = 0;
  int alice_basis_bit = 0;  // 0 -> basis0, 1 -> basis1
  Basis alice_basis = bases::up_down();
  std::vector<EigenIndex> alice_outcomes;
  Ensemble bob_particles{{}, DensityMatrix::maximally_mixed()};
};

// Alice collapses n fresh singlet halves in `basis`; the partners form Bob's
// ensemble. kExactHalf postselects on exactly n/2 plus outcomes.
BlockRecord run_alice_block(std::size_t block_index, int basis_bit, const Basis& basis,
                            std::size_t n, SplitMode mode, Rng& rng);

// One block per message bit (plus the leading reference block in
// differential mode). Block k draws from its own seed stream.
std::vector<BlockRecord> run_alice_blocks(const ScenarioConfig& cfg);

// Reference block in basis0 paired with data block k in absolute mode.
BlockRecord run_reference_block(const ScenarioConfig& cfg, std::size_t k);

StrategyVerdict bob_physical_decide(const BlockRecord& first, const BlockRecord& second,
                                    const MeasurementStrategy& strategy, Rng& rng);

// Axis shared (up to sign) by every label in the block. ProtocolError if the
// labels disagree or the block is empty; UnsupportedInput for Haar labels.
BlochVector block_preparation_axis(const BlockRecord& block);

inline constexpr double kOracleAxisTolerance = 1e-6;  // radians

// 1 iff the two blocks' preparation axes differ by more than the tolerance.
int bob_basis_oracle_decide(const BlockRecord& first, const BlockRecord& second);

struct CloneVerdict {
  int bit = 0;  // 0 -> nearer basis0's axis, 1 -> basis1's
  std::size_t votes0 = 0;
  std::size_t votes1 = 0;
  // Per particle |r . axis1| - |r . axis0| of the tomographic estimate.
  std::vector<double> margins;
};

// Copies each particle's exact state m_clones times, measures clone j along
// axis (offset + j) mod 3 of (x, y, z) with a random offset per particle,
// estimates the Bloch vector (unmeasured axes read as 0), classifies it to
// the nearer reference axis and takes the majority. Ties are broken by a
// fair coin. DomainError if m_clones is 0 or the block is empty.
CloneVerdict bob_clone_oracle_decide(const BlockRecord& block, std::size_t m_clones,
                                     const Basis& reference0, const Basis& reference1, Rng& rng);

struct BlockSummary {
  std::size_t block_index = 0;
  int alice_basis_bit = 0;
  std::size_t alice_plus = 0;
  std::optional<int> sent_bit;  // empty for the differential reference block
  std::optional<int> decoded_bit;
  double statistic = 0.0;  // min p-value (physical), mean margin (clone), 0 (basis oracle)
  std::string labels;      // "+-+..." in basis order; only filled for oracle devices
};

struct ChannelReport {
  std::string sent_message;
  std::string decoded_message;
  double bit_error_rate = 0.0;
  std::vector<BlockSummary> blocks;
  std::string device_mode;
};

ChannelReport run_channel(const ScenarioConfig& cfg);

// Monte-Carlo harnesses. Every trial t draws from stream derive(seed, t).

struct TrialSpec {
  std::size_t n_per_block = 100;
  std::size_t trials = 1000;
  Basis basis0 = bases::up_down();
  Basis basis1 = bases::right_left();
  SplitMode mode = SplitMode::kSampled;
  std::uint64_t seed = 0;
};

// Trial: fair coin picks same/different; first block in basis0, second in
// basis0 or basis1; success when the verdict matches.
double physical_distinguishing_accuracy(const TrialSpec& spec, const MeasurementStrategy& strategy);

// Trial: fair coin picks the basis of one block; success when the clone
// oracle names it.
double clone_oracle_accuracy(const TrialSpec& spec, std::size_t m_clones);

// Bob's ensemble density as implied by the collapse rule when Alice measures
// her singlet halves in `alice_basis`.
DensityMatrix expected_bob_density(const Basis& alice_basis);

// n pairs per arm, arm 0 collapsed by Alice in basis0 and arm 1 in basis1;
// Bob measures every particle in `bob_basis` and the plus counts of the
// arms are compared.
TestResult pooled_nosignal_test(std::size_t n_per_arm, const Basis& basis0, const Basis& basis1,
                                const Basis& bob_basis, Rng& rng);

// Two independent same-basis blocks of n, all measured in `bob_basis`; one
// two-proportion p-value per run.
std::vector<double> null_calibration_pvalues(std::size_t n, std::size_t runs, const Basis& basis,
                                             const Basis& bob_basis, std::uint64_t seed);

}  // namespace irho
