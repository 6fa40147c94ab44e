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

#include "irho/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "irho/errors.hpp"
#include "irho/protocol.hpp"

namespace irho {
namespace {

constexpr double kPi = std::numbers::pi;

PureState random_pure(Rng& rng) {
  return PureState::from_angles(std::acos(2 * rng.uniform() - 1), 2 * kPi * rng.uniform());
}

TEST(Tomography, UpStateCounts) {
  Rng rng(1);
  const std::size_t n = 10000;
  const auto counts = sample_tomography_counts(PureState::up(), n, rng);
  EXPECT_EQ(counts.axes[2].n_plus, n);
  EXPECT_EQ(counts.axes[2].n_minus, 0);
  const auto est = tomography_estimate(counts);
  EXPECT_EQ(est.raw.z, 1.0);
  EXPECT_LE(std::abs(est.raw.x), 3 / std::sqrt(double(n)));
  EXPECT_LE(std::abs(est.raw.y), 3 / std::sqrt(double(n)));
}

TEST(Tomography, BalancedCountsGiveCentre) {
  TomographyCounts c;
  for (auto& a : c.axes) a = {500, 500};
  const auto est = tomography_estimate(c);
  EXPECT_EQ(est.raw.norm(), 0.0);
  EXPECT_EQ(est.physical.norm(), 0.0);
}

TEST(Tomography, EmptyAxisRejected) {
  TomographyCounts c;
  c.axes[0] = {3, 4};
  c.axes[2] = {1, 0};
  EXPECT_THROW(tomography_estimate(c), DomainError);
  c.axes[1] = {-1, 2};
  EXPECT_THROW(tomography_estimate(c), DomainError);
}

TEST(Tomography, PhysicalProjectionScalesOntoBall) {
  TomographyCounts c;
  for (auto& a : c.axes) a = {10, 0};
  const auto est = tomography_estimate(c);
  EXPECT_NEAR(est.raw.norm(), std::sqrt(3.0), kExactTol);
  EXPECT_NEAR(est.physical.norm(), 1.0, kExactTol);
  EXPECT_NEAR(est.physical.x, 1 / std::sqrt(3.0), kExactTol);
}

TEST(Tomography, ExpectedCountsRecoverTruth) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const PureState s = random_pure(rng);
    const auto est = tomography_estimate(expected_tomography_counts(s, 1000.0));
    const BlochVector r = bloch_of(s);
    EXPECT_NEAR(est.raw.x, r.x, kExactTol);
    EXPECT_NEAR(est.raw.y, r.y, kExactTol);
    EXPECT_NEAR(est.raw.z, r.z, kExactTol);
  }
}

TEST(Tomography, ErrorBoundOnRandomStates) {
  Rng rng(3);
  const std::size_t n = 10000;
  int within = 0;
  const int runs = 200;
  for (int i = 0; i < runs; ++i) {
    const PureState s = random_pure(rng);
    const auto est = tomography_estimate(sample_tomography_counts(s, n, rng));
    within += (est.raw - bloch_of(s)).norm() <= 5 / std::sqrt(double(n));
  }
  EXPECT_GE(within, runs * 99 / 100);
}

TEST(TwoProportion, IdenticalProportions) {
  const auto r = two_proportion_test(500, 1000, 500, 1000);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_FALSE(r.rejects());
}

TEST(TwoProportion, LargeDifference) {
  const auto r = two_proportion_test(600, 1000, 400, 1000);
  // Pooled p = 1/2: z = 0.2 / sqrt(0.25 * 2/1000).
  EXPECT_NEAR(r.statistic, 0.2 / std::sqrt(0.25 * 0.002), 1e-9);
  EXPECT_NEAR(r.statistic, 8.94427191, 1e-8);
  EXPECT_LT(r.p_value, 1e-15);
  EXPECT_TRUE(r.rejects());
}

TEST(TwoProportion, DegenerateVarianceIsOne) {
  EXPECT_EQ(two_proportion_test(0, 10, 0, 20).p_value, 1.0);
  EXPECT_EQ(two_proportion_test(10, 10, 20, 20).p_value, 1.0);
}

TEST(TwoProportion, InvalidInput) {
  EXPECT_THROW(two_proportion_test(0, 0, 1, 2), DomainError);
  EXPECT_THROW(two_proportion_test(3, 2, 1, 2), DomainError);
}

TEST(TwoProportion, PValueInUnitIntervalAndSymmetric) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n1 = 1 + rng.index(500), n2 = 1 + rng.index(500);
    const std::uint64_t k1 = rng.index(n1 + 1), k2 = rng.index(n2 + 1);
    const auto a = two_proportion_test(k1, n1, k2, n2);
    const auto b = two_proportion_test(k2, n2, k1, n1);
    EXPECT_GE(a.p_value, 0.0);
    EXPECT_LE(a.p_value, 1.0);
    EXPECT_NEAR(a.p_value, b.p_value, 1e-12);
  }
}

TEST(NormalTail, KnownQuantiles) {
  EXPECT_NEAR(normal_two_sided_p(1.959963984540054), 0.05, 1e-12);
  EXPECT_NEAR(normal_two_sided_p(-2.5758293035489), 0.01, 1e-12);
  EXPECT_EQ(normal_two_sided_p(0), 1.0);
}

TEST(TwoProportion, NullCalibration) {
  const std::size_t runs = 1000;
  const auto p = null_calibration_pvalues(1000, runs, bases::up_down(), bases::right_left(), 2024);
  int rejects = 0;
  for (double v : p) rejects += v < 0.05;
  const double rate = rejects / double(runs);
  EXPECT_NEAR(rate, 0.05, 3 * std::sqrt(0.05 * 0.95 / runs));
}

TEST(EmpiricalTv, Examples) {
  const std::vector<std::uint64_t> a{3, 5, 2}, b{6, 10, 4}, c{0, 0, 7}, d{5, 0, 0};
  EXPECT_NEAR(empirical_tv_distance(a, b), 0.0, kExactTol);
  EXPECT_NEAR(empirical_tv_distance(c, d), 1.0, kExactTol);
  EXPECT_NEAR(empirical_tv_distance(std::vector<std::uint64_t>{1, 1}, std::vector<std::uint64_t>{1, 0}), 0.5,
              kExactTol);
}

TEST(EmpiricalTv, FairCoins) {
  Rng rng(5);
  std::vector<std::uint64_t> h1(2), h2(2);
  for (int i = 0; i < 100000; ++i) {
    h1[rng.coin()]++;
    h2[rng.coin()]++;
  }
  EXPECT_LE(empirical_tv_distance(h1, h2), 0.01);
}

TEST(EmpiricalTv, InvalidInput) {
  EXPECT_THROW(empirical_tv_distance(std::vector<std::uint64_t>{1}, std::vector<std::uint64_t>{1, 2}),
               DomainError);
  EXPECT_THROW(empirical_tv_distance(std::vector<std::uint64_t>{0, 0}, std::vector<std::uint64_t>{1, 2}),
               DomainError);
}

TEST(Chsh, SingletCorrelatorIsMinusCosine) {
  const auto s = optimal_chsh_settings();
  const auto e = chsh_correlators_exact(TwoQubitState::singlet(), s);
  const Basis* pairs[4][2] = {{&s.a1, &s.b1}, {&s.a1, &s.b2}, {&s.a2, &s.b1}, {&s.a2, &s.b2}};
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(e[k], -pairs[k][0]->axis().dot(pairs[k][1]->axis()), kExactTol);
  }
}

TEST(Chsh, AnalyticReachesTsirelsonBound) {
  const auto e = chsh_correlators_exact(TwoQubitState::singlet(), optimal_chsh_settings());
  EXPECT_NEAR(chsh_value(e), 2 * std::numbers::sqrt2, 1e-9);
}

TEST(Chsh, SampledNearTsirelsonBound) {
  Rng rng(6);
  const auto e = chsh_correlators_sampled(optimal_chsh_settings(), 100000, rng);
  EXPECT_NEAR(chsh_value(e), 2 * std::numbers::sqrt2, 0.05);
}

TEST(Chsh, DeterministicStrategiesObeyClassicalBound) {
  // Brute force over every assignment of +-1 outcomes to the four settings.
  double best = 0;
  int count = 0;
  for (int a1 : {-1, 1}) {
    for (int a2 : {-1, 1}) {
      for (int b1 : {-1, 1}) {
        for (int b2 : {-1, 1}) {
          const double s = a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2;
          EXPECT_LE(std::abs(s), 2.0);
          best = std::max(best, std::abs(s));
          ++count;
        }
      }
    }
  }
  EXPECT_EQ(count, 16);
  EXPECT_EQ(best, 2.0);
  for (double s : deterministic_chsh_values()) EXPECT_LE(std::abs(s), 2.0);
}

TEST(Chsh, ValueFormula) { EXPECT_EQ(chsh_value({1, 1, 1, -1}), 4.0); }

}  // namespace
}  // namespace irho
