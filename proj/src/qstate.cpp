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

#include "irho/qstate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "irho/errors.hpp"

namespace irho {
namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector BlochVector::cross(const BlochVector& o) const {
  return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
}

double line_angle(const BlochVector& a, const BlochVector& b) {
  return std::atan2(a.cross(b).norm(), std::abs(a.dot(b)));
}

PureState::PureState(Complex up, Complex down) : up_(up), down_(down) {
  if (!finite(up) || !finite(down)) throw DomainError("PureState: non-finite amplitude");
  const double n = std::norm(up) + std::norm(down);
  if (std::abs(n - 1.0) > kExactTol) {
    throw DomainError("PureState: squared norm " + std::to_string(n) + " is not 1");
  }
}

PureState PureState::from_angles(double theta, double phi) {
  return {std::cos(theta / 2), std::polar(1.0, phi) * std::sin(theta / 2)};
}

Complex PureState::inner(const PureState& other) const {
  return std::conj(up_) * other.up_ + std::conj(down_) * other.down_;
}

PureState PureState::with_phase(double phase) const {
  const Complex f = std::polar(1.0, phase);
  return {f * up_, f * down_};
}

bool states_equal_up_to_phase(const PureState& a, const PureState& b) {
  return std::abs(std::abs(a.inner(b)) - 1.0) <= kComposedTol;
}

Basis::Basis(PureState plus, PureState minus)
    : plus_(plus), minus_(minus), axis_(bloch_of(plus)) {
  if (std::abs(plus_.inner(minus_)) > kExactTol) {
    throw DomainError("Basis: eigenstates are not orthogonal");
  }
}

double Basis::plus_probability(const PureState& s) const {
  return std::clamp(std::norm(plus_.inner(s)), 0.0, 1.0);
}

Basis basis_from_axis(double theta, double phi) {
  constexpr double pi = std::numbers::pi;
  if (!(theta >= 0.0 && theta <= pi)) throw DomainError("basis_from_axis: theta outside [0, pi]");
  if (!(phi >= 0.0 && phi < 2 * pi)) throw DomainError("basis_from_axis: phi outside [0, 2pi)");
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const Complex e = std::polar(1.0, phi);
  return {PureState(c, e * s), PureState(s, -e * c)};
}

namespace bases {

Basis up_down() { return {PureState::up(), PureState::down()}; }

Basis right_left() {
  const double h = std::numbers::sqrt2 / 2;
  return {PureState(h, Complex(0, h)), PureState(h, Complex(0, -h))};
}

Basis in_out() {
  const double h = std::numbers::sqrt2 / 2;
  return {PureState(h, h), PureState(h, -h)};
}

}  // namespace bases

TwoQubitState::TwoQubitState(const std::array<Complex, 4>& amps) : amps_(amps) {
  double n = 0.0;
  for (const auto& a : amps_) {
    if (!finite(a)) throw DomainError("TwoQubitState: non-finite amplitude");
    n += std::norm(a);
  }
  if (std::abs(n - 1.0) > kExactTol) throw DomainError("TwoQubitState: not normalized");
}

TwoQubitState TwoQubitState::singlet() {
  const double h = std::numbers::sqrt2 / 2;
  return TwoQubitState({0.0, h, -h, 0.0});
}

TwoQubitState TwoQubitState::product(const PureState& first, const PureState& second) {
  const Complex f[2] = {first.amp_up(), first.amp_down()};
  const Complex s[2] = {second.amp_up(), second.amp_down()};
  return TwoQubitState({f[0] * s[0], f[0] * s[1], f[1] * s[0], f[1] * s[1]});
}

std::pair<double, double> hermitian2_eigenvalues(double a, double d, Complex b) {
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(b));
  return {mean - radius, mean + radius};
}

namespace {

std::vector<double> hermitian_eigenvalues(std::size_t dim, const Complex* m) {
  if (dim == 2) {
    auto [lo, hi] = hermitian2_eigenvalues(m[0].real(), m[3].real(), m[1]);
    return {lo, hi};
  }
  Eigen::MatrixXcd mat(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) mat(i, j) = m[i * dim + j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

}  // namespace

DensityMatrix::DensityMatrix(std::size_t dim, std::span<const Complex> entries) : dim_(dim) {
  if (dim != 2 && dim != 4) throw DomainError("DensityMatrix: dimension must be 2 or 4");
  if (entries.size() != dim * dim) throw DomainError("DensityMatrix: wrong number of entries");
  std::copy(entries.begin(), entries.end(), entries_.begin());
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const Complex v = (*this)(i, j);
      if (!finite(v)) throw DomainError("DensityMatrix: non-finite entry");
      if (std::abs(v - std::conj((*this)(j, i))) > kExactTol) {
        throw DomainError("DensityMatrix: not Hermitian");
      }
    }
  }
  if (std::abs(trace() - 1.0) > kExactTol) throw DomainError("DensityMatrix: trace is not 1");
  if (eigenvalues().front() < -kPsdTol) throw DomainError("DensityMatrix: not positive semidefinite");
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  std::array<Complex, 16> e{};
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0 / static_cast<double>(dim);
  return DensityMatrix(dim, std::span<const Complex>(e.data(), dim * dim));
}

DensityMatrix DensityMatrix::of_pair(const TwoQubitState& psi) {
  std::array<Complex, 16> e{};
  const auto& a = psi.amps();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) e[i * 4 + j] = a[i] * std::conj(a[j]);
  }
  return DensityMatrix(4, e);
}

Complex DensityMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<double> DensityMatrix::eigenvalues() const {
  return hermitian_eigenvalues(dim_, entries_.data());
}

double max_entry_difference(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("max_entry_difference: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  }
  return worst;
}

BlochVector bloch_of(const PureState& s) {
  const Complex c = std::conj(s.amp_up()) * s.amp_down();
  return {2 * c.real(), 2 * c.imag(), std::norm(s.amp_up()) - std::norm(s.amp_down())};
}

BlochVector bloch_of(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DomainError("bloch_of: expected a single-qubit density matrix");
  const Complex lower = rho(1, 0);
  return {2 * lower.real(), 2 * lower.imag(), rho(0, 0).real() - rho(1, 1).real()};
}

DensityMatrix density_from_bloch(const BlochVector& r) {
  if (!(r.norm() <= 1.0 + kExactTol)) throw DomainError("density_from_bloch: |r| > 1");
  return DensityMatrix(2, {Complex(0.5 * (1 + r.z)), Complex(0.5 * r.x, -0.5 * r.y),
                           Complex(0.5 * r.x, 0.5 * r.y), Complex(0.5 * (1 - r.z))});
}

DensityMatrix projector(const PureState& s) {
  const Complex a = s.amp_up();
  const Complex b = s.amp_down();
  // Diagonal from |a|^2 and 1 - |a|^2 keeps the trace exact.
  const double p = std::norm(a);
  return DensityMatrix(2, {Complex(p), a * std::conj(b), b * std::conj(a), Complex(1.0 - p)});
}

DensityMatrix mix(std::span<const WeightedState> components) {
  if (components.empty()) throw DomainError("mix: no components");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw DomainError("mix: negative weight");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kExactTol) throw DomainError("mix: weights do not sum to 1");
  std::array<Complex, 4> acc{};
  for (const auto& c : components) {
    const Complex a = c.state.amp_up();
    const Complex b = c.state.amp_down();
    acc[0] += c.weight * std::norm(a);
    acc[1] += c.weight * a * std::conj(b);
    acc[2] += c.weight * b * std::conj(a);
    acc[3] += c.weight * std::norm(b);
  }
  for (auto& v : acc) v /= total;
  return DensityMatrix(2, acc);
}

DensityMatrix partial_trace_first_kept(const TwoQubitState& psi) {
  std::array<Complex, 4> rho{};
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t ap = 0; ap < 2; ++ap) {
      for (std::size_t b = 0; b < 2; ++b) rho[2 * a + ap] += psi.amp(a, b) * std::conj(psi.amp(ap, b));
    }
  }
  return DensityMatrix(2, rho);
}

DensityMatrix partial_trace_second_kept(const TwoQubitState& psi) {
  std::array<Complex, 4> rho{};
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t bp = 0; bp < 2; ++bp) {
      for (std::size_t a = 0; a < 2; ++a) rho[2 * b + bp] += psi.amp(a, b) * std::conj(psi.amp(a, bp));
    }
  }
  return DensityMatrix(2, rho);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DomainError("trace_distance: dimension mismatch");
  const std::size_t d = rho.dim();
  std::array<Complex, 16> diff{};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) diff[i * d + j] = rho(i, j) - sigma(i, j);
  }
  double sum = 0.0;
  for (double ev : hermitian_eigenvalues(d, diff.data())) sum += std::abs(ev);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

}  // namespace irho
