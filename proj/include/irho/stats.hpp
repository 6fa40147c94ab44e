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
#include <cstddef>
#include <cstdint>
#include <span>

#include "irho/measurement.hpp"
#include "irho/qstate.hpp"
#include "irho/rng.hpp"

namespace irho {

// Outcome tallies along one measurement axis. Counts are doubles so that
// analytic expected counts can go through the same estimator.
struct AxisCounts {
  double n_plus = 0;
  double n_minus = 0;
  double total() const { return n_plus + n_minus; }
};

// Tallies along x, y, z in that order.
struct TomographyCounts {
  std::array<AxisCounts, 3> axes;
};

struct TomographyEstimate {
  BlochVector raw;       // linear inversion, may leave the Bloch ball
  BlochVector physical;  // raw scaled back onto the ball when needed
};

// r_i = (n_plus_i - n_minus_i) / (n_plus_i + n_minus_i). DomainError if an
// axis has no counts.
TomographyEstimate tomography_estimate(const TomographyCounts& counts);

// Measures n_per_axis copies of `state` along each of x, y, z.
TomographyCounts sample_tomography_counts(const PureState& state, std::size_t n_per_axis, Rng& rng);
// The counts a perfect experiment would expect on average.
TomographyCounts expected_tomography_counts(const PureState& state, double n_per_axis);

// x, y, z measurement bases (In/Out, right/left, up/down).
const std::array<Basis, 3>& tomography_bases();

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double reject_at = 0.05;
  bool rejects() const { return p_value < reject_at; }
};

// Pooled two-proportion z-test, two-sided. A degenerate pooled variance
// (all successes or all failures) yields p = 1. DomainError if n1 or n2 is 0.
TestResult two_proportion_test(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2,
                               std::uint64_t n2, double alpha = 0.05);

// Two-sided standard normal tail probability P(|Z| >= |z|).
double normal_two_sided_p(double z);

// (1/2) sum |p_i - q_i| between normalized histograms over the same support.
double empirical_tv_distance(std::span<const std::uint64_t> hist1,
                             std::span<const std::uint64_t> hist2);

// Correlators ordered E(a1,b1), E(a1,b2), E(a2,b1), E(a2,b2).
using Correlators = std::array<double, 4>;
// S = E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)
double chsh_value(const Correlators& e);

struct ChshSettings {
  Basis a1, a2, b1, b2;
};
// Axes in the x-z plane at which the singlet reaches S = 2 sqrt2.
ChshSettings optimal_chsh_settings();

Correlators chsh_correlators_exact(const TwoQubitState& psi, const ChshSettings& s);
// Sampled with collapse_first + measure_second on fresh singlet pairs.
Correlators chsh_correlators_sampled(const ChshSettings& s, std::size_t samples_per_setting, Rng& rng);

// S for each of the 16 deterministic local strategies (outputs +-1 fixed per
// setting), indexed by the bit pattern (A(a1), A(a2), B(b1), B(b2)).
std::array<double, 16> deterministic_chsh_values();

}  // namespace irho
