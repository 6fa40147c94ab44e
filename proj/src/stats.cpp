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

#include <cmath>
#include <numbers>

#include "irho/errors.hpp"

namespace irho {

TomographyEstimate tomography_estimate(const TomographyCounts& counts) {
  double r[3];
  for (std::size_t i = 0; i < 3; ++i) {
    const AxisCounts& a = counts.axes[i];
    if (a.n_plus < 0 || a.n_minus < 0) throw DomainError("tomography_estimate: negative count");
    if (!(a.total() > 0)) throw DomainError("tomography_estimate: axis without measurements");
    r[i] = (a.n_plus - a.n_minus) / a.total();
  }
  TomographyEstimate est{{r[0], r[1], r[2]}, {r[0], r[1], r[2]}};
  const double n = est.raw.norm();
  if (n > 1.0) est.physical = est.raw * (1.0 / n);
  return est;
}

const std::array<Basis, 3>& tomography_bases() {
  static const std::array<Basis, 3> b = {bases::in_out(), bases::right_left(), bases::up_down()};
  return b;
}

TomographyCounts sample_tomography_counts(const PureState& state, std::size_t n_per_axis, Rng& rng) {
  TomographyCounts c;
  for (std::size_t i = 0; i < 3; ++i) {
    const double p = tomography_bases()[i].plus_probability(state);
    std::uint64_t plus = 0;
    for (std::size_t k = 0; k < n_per_axis; ++k) plus += rng.uniform() < p ? 1 : 0;
    c.axes[i] = {static_cast<double>(plus), static_cast<double>(n_per_axis - plus)};
  }
  return c;
}

TomographyCounts expected_tomography_counts(const PureState& state, double n_per_axis) {
  TomographyCounts c;
  for (std::size_t i = 0; i < 3; ++i) {
    const double p = tomography_bases()[i].plus_probability(state);
    c.axes[i] = {p * n_per_axis, (1.0 - p) * n_per_axis};
  }
  return c;
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

TestResult two_proportion_test(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2,
                               std::uint64_t n2, double alpha) {
  if (n1 == 0 || n2 == 0) throw DomainError("two_proportion_test: empty sample");
  if (k1 > n1 || k2 > n2) throw DomainError("two_proportion_test: more successes than trials");
  const double f1 = static_cast<double>(n1);
  const double f2 = static_cast<double>(n2);
  const double pooled = static_cast<double>(k1 + k2) / (f1 + f2);
  TestResult r;
  r.reject_at = alpha;
  if (pooled <= 0.0 || pooled >= 1.0) return r;
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / f1 + 1.0 / f2));
  r.statistic = (static_cast<double>(k1) / f1 - static_cast<double>(k2) / f2) / se;
  r.p_value = std::min(1.0, normal_two_sided_p(r.statistic));
  return r;
}

double empirical_tv_distance(std::span<const std::uint64_t> hist1,
                             std::span<const std::uint64_t> hist2) {
  if (hist1.size() != hist2.size()) throw DomainError("empirical_tv_distance: support mismatch");
  double t1 = 0, t2 = 0;
  for (auto v : hist1) t1 += static_cast<double>(v);
  for (auto v : hist2) t2 += static_cast<double>(v);
  if (t1 == 0 || t2 == 0) throw DomainError("empirical_tv_distance: empty histogram");
  double sum = 0.0;
  for (std::size_t i = 0; i < hist1.size(); ++i) {
    sum += std::abs(static_cast<double>(hist1[i]) / t1 - static_cast<double>(hist2[i]) / t2);
  }
  return std::min(1.0, 0.5 * sum);
}

double chsh_value(const Correlators& e) { return e[0] + e[1] + e[2] - e[3]; }

ChshSettings optimal_chsh_settings() {
  constexpr double pi = std::numbers::pi;
  // Alice along z and x; Bob along the two diagonals pointing into z < 0.
  return {basis_from_axis(0.0, 0.0), basis_from_axis(pi / 2, 0.0),
          basis_from_axis(3 * pi / 4, pi), basis_from_axis(3 * pi / 4, 0.0)};
}

Correlators chsh_correlators_exact(const TwoQubitState& psi, const ChshSettings& s) {
  return {correlator(joint_probabilities(psi, s.a1, s.b1)),
          correlator(joint_probabilities(psi, s.a1, s.b2)),
          correlator(joint_probabilities(psi, s.a2, s.b1)),
          correlator(joint_probabilities(psi, s.a2, s.b2))};
}

Correlators chsh_correlators_sampled(const ChshSettings& s, std::size_t samples_per_setting, Rng& rng) {
  if (samples_per_setting == 0) throw DomainError("chsh_correlators_sampled: no samples");
  const Basis* settings[4][2] = {{&s.a1, &s.b1}, {&s.a1, &s.b2}, {&s.a2, &s.b1}, {&s.a2, &s.b2}};
  Correlators e{};
  for (std::size_t k = 0; k < 4; ++k) {
    std::int64_t same = 0;
    for (std::size_t i = 0; i < samples_per_setting; ++i) {
      EntangledPair pair(TwoQubitState::singlet(), i);
      const auto a = collapse_first(pair, *settings[k][0], rng).eigen_index;
      const auto b = measure_second(pair, *settings[k][1], rng).eigen_index;
      same += a == b ? 1 : -1;
    }
    e[k] = static_cast<double>(same) / static_cast<double>(samples_per_setting);
  }
  return e;
}

std::array<double, 16> deterministic_chsh_values() {
  std::array<double, 16> out{};
  for (unsigned m = 0; m < 16; ++m) {
    const double a1 = (m & 1) ? -1 : 1;
    const double a2 = (m & 2) ? -1 : 1;
    const double b1 = (m & 4) ? -1 : 1;
    const double b2 = (m & 8) ? -1 : 1;
    out[m] = chsh_value({a1 * b1, a1 * b2, a2 * b1, a2 * b2});
  }
  return out;
}

}  // namespace irho
