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

// One- and two-qubit states: pure states, density matrices, Bloch geometry,
// partial traces and distances. Every type is an immutable value.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace irho {

using Complex = std::complex<double>;

// Tolerance tiers. Exact algebraic identities are held to kExactTol; anything
// that goes through square roots, eigenvalues or long sums uses kComposedTol.
inline constexpr double kExactTol = 1e-12;
inline constexpr double kComposedTol = 1e-9;
inline constexpr double kPsdTol = 1e-10;

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector cross(const BlochVector& o) const;
  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
};

// Angle in [0, pi/2] between the lines spanned by two nonzero vectors, i.e.
// the angle between two measurement axes when the sign is irrelevant.
double line_angle(const BlochVector& a, const BlochVector& b);

// Normalized qubit state a|up> + b|down>. Global phase is kept as given.
class PureState {
 public:
  // Throws DomainError unless |up|^2 + |down|^2 = 1 within kExactTol.
  PureState(Complex up, Complex down);

  static PureState up() { return {1.0, 0.0}; }
  static PureState down() { return {0.0, 1.0}; }
  // Point on the sphere at polar angle theta, azimuth phi.
  static PureState from_angles(double theta, double phi);

  Complex amp_up() const { return up_; }
  Complex amp_down() const { return down_; }

  // <this|other>
  Complex inner(const PureState& other) const;
  PureState with_phase(double phase) const;

 private:
  Complex up_;
  Complex down_;
};

bool states_equal_up_to_phase(const PureState& a, const PureState& b);

enum class EigenIndex { kPlus, kMinus };

inline EigenIndex opposite(EigenIndex e) {
  return e == EigenIndex::kPlus ? EigenIndex::kMinus : EigenIndex::kPlus;
}

// Orthonormal measurement basis; equivalently a Bloch axis.
class Basis {
 public:
  // Throws DomainError if the states are not orthogonal.
  Basis(PureState plus, PureState minus);

  const PureState& plus() const { return plus_; }
  const PureState& minus() const { return minus_; }
  const PureState& eigenstate(EigenIndex e) const {
    return e == EigenIndex::kPlus ? plus_ : minus_;
  }
  // Bloch direction of the plus state.
  const BlochVector& axis() const { return axis_; }

  // Probability of the plus outcome when measuring `s` in this basis.
  double plus_probability(const PureState& s) const;

 private:
  PureState plus_;
  PureState minus_;
  BlochVector axis_;
};

// plus = cos(t/2)|up> + e^{i p} sin(t/2)|down>,
// minus = sin(t/2)|up> - e^{i p} cos(t/2)|down>.
// Requires theta in [0, pi] and phi in [0, 2 pi); otherwise DomainError.
Basis basis_from_axis(double theta, double phi);

namespace bases {
Basis up_down();     // |up>, |down>
Basis right_left();  // (|up> +- i|down>)/sqrt2
Basis in_out();      // (|up> +- |down>)/sqrt2
}  // namespace bases

// Amplitudes over (uu, ud, du, dd); the first letter belongs to the first
// particle.
class TwoQubitState {
 public:
  explicit TwoQubitState(const std::array<Complex, 4>& amps);

  static TwoQubitState singlet();
  static TwoQubitState product(const PureState& first, const PureState& second);

  Complex amp(std::size_t a, std::size_t b) const { return amps_[2 * a + b]; }
  const std::array<Complex, 4>& amps() const { return amps_; }

 private:
  std::array<Complex, 4> amps_;
};

// Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4.
class DensityMatrix {
 public:
  // Row-major entries; validates every invariant (DomainError on failure).
  DensityMatrix(std::size_t dim, std::span<const Complex> entries);
  DensityMatrix(std::size_t dim, std::initializer_list<Complex> entries)
      : DensityMatrix(dim, std::span<const Complex>(entries.begin(), entries.size())) {}

  static DensityMatrix maximally_mixed(std::size_t dim = 2);
  static DensityMatrix of_pair(const TwoQubitState& psi);

  std::size_t dim() const { return dim_; }
  Complex operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  Complex trace() const;
  // Ascending eigenvalues. Closed form for 2x2.
  std::vector<double> eigenvalues() const;

 private:
  std::size_t dim_;
  std::array<Complex, 16> entries_{};
};

double max_entry_difference(const DensityMatrix& a, const DensityMatrix& b);

BlochVector bloch_of(const PureState& s);
// Requires a 2x2 matrix.
BlochVector bloch_of(const DensityMatrix& rho);
// (I + x X + y Y + z Z)/2. DomainError when |r| > 1 + kExactTol.
DensityMatrix density_from_bloch(const BlochVector& r);

DensityMatrix projector(const PureState& s);

struct WeightedState {
  double weight;
  PureState state;
};
// Sum of w_i |s_i><s_i|. Weights must be nonnegative and sum to one.
DensityMatrix mix(std::span<const WeightedState> components);
inline DensityMatrix mix(std::initializer_list<WeightedState> components) {
  return mix(std::span<const WeightedState>(components.begin(), components.size()));
}

// rho_{a a'} = sum_b psi_{ab} conj(psi_{a'b})
DensityMatrix partial_trace_first_kept(const TwoQubitState& psi);
// rho_{b b'} = sum_a psi_{ab} conj(psi_{ab'})
DensityMatrix partial_trace_second_kept(const TwoQubitState& psi);

// (1/2) sum |eig(rho - sigma)|. DomainError on dimension mismatch.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Closed-form eigenvalues of a 2x2 Hermitian matrix [[a, b], [conj b, d]],
// ascending.
std::pair<double, double> hermitian2_eigenvalues(double a, double d, Complex b);

}  // namespace irho
