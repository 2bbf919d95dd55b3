// Copyright 2026 The cvarbound Authors
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

#include "cvarbound/state.hpp"

#include <bit>
#include <string>

#include "cvarbound/errors.hpp"

namespace cvarbound {

namespace {

// Applies a 2x2 matrix on bit `bit` of a flat vector of length 2^bits.
void apply_matrix_on_bit(std::vector<Complex>& v, int bit, const Matrix2& u) {
  const std::size_t stride = std::size_t{1} << bit;
  const std::size_t size = v.size();
  for (std::size_t base = 0; base < size; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a0 = v[i];
      const Complex a1 = v[i + stride];
      v[i] = u[0] * a0 + u[1] * a1;
      v[i + stride] = u[2] * a0 + u[3] * a1;
    }
  }
}

void apply_cnot_on_bits(std::vector<Complex>& v, int control, int target) {
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(v[i], v[i | tbit]);
  }
}

Matrix2 conjugated(const Matrix2& u) {
  return {std::conj(u[0]), std::conj(u[1]), std::conj(u[2]), std::conj(u[3])};
}

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) {
    throw ValidationError("qubit " + std::to_string(q) + " out of range for n = " +
                          std::to_string(n));
  }
}

}  // namespace

Statevector::Statevector(int n) : n_(n) {
  if (n < 0 || n > 62) throw ResourceLimitError("statevector qubit count out of range");
  amps_.assign(std::size_t{1} << n, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

Statevector::Statevector(int n, std::vector<Complex> amplitudes)
    : n_(n), amps_(std::move(amplitudes)) {
  if (n < 0 || n > 62 || amps_.size() != (std::size_t{1} << n)) {
    throw ValidationError("statevector amplitude count does not match 2^n");
  }
}

void Statevector::apply_1q(int qubit, const Matrix2& u) {
  check_qubit(qubit, n_);
  apply_matrix_on_bit(amps_, qubit, u);
}

void Statevector::apply_cnot(int control, int target) {
  check_qubit(control, n_);
  check_qubit(target, n_);
  apply_cnot_on_bits(amps_, control, target);
}

void Statevector::apply_pauli(std::uint64_t x_mask, std::uint64_t z_mask) {
  // P|j> = i^{|x&z|} (-1)^{|j&z|} |j ^ x>
  const int y_count = std::popcount(x_mask & z_mask);
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex global = kIPow[y_count & 3];
  std::vector<Complex> out(amps_.size());
  for (std::size_t j = 0; j < amps_.size(); ++j) {
    const double s = (std::popcount(j & z_mask) & 1) ? -1.0 : 1.0;
    out[j ^ x_mask] = global * s * amps_[j];
  }
  amps_.swap(out);
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

DensityMatrix::DensityMatrix(int n) : n_(n) {
  if (n < 0 || n > 15) throw ResourceLimitError("density matrix qubit count out of range");
  data_.assign(std::size_t{1} << (2 * n), Complex{0.0, 0.0});
  data_[0] = 1.0;
}

DensityMatrix DensityMatrix::from_statevector(const Statevector& psi) {
  DensityMatrix rho(psi.num_qubits());
  const std::size_t dim = psi.dimension();
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) rho.at(r, c) = psi[r] * std::conj(psi[c]);
  }
  return rho;
}

void DensityMatrix::apply_1q(int qubit, const Matrix2& u) {
  check_qubit(qubit, n_);
  apply_matrix_on_bit(data_, qubit + n_, u);
  apply_matrix_on_bit(data_, qubit, conjugated(u));
}

void DensityMatrix::apply_cnot(int control, int target) {
  check_qubit(control, n_);
  check_qubit(target, n_);
  apply_cnot_on_bits(data_, control + n_, target + n_);
  apply_cnot_on_bits(data_, control, target);
}

void DensityMatrix::apply_pauli_mixture(std::uint64_t x_mask, std::uint64_t z_mask, double w) {
  // (P rho P)_{rc} = (-1)^{|r&z| + |c&z|} rho_{r^x, c^x}
  const std::size_t dim = dimension();
  std::vector<Complex> out(data_.size());
  for (std::size_t r = 0; r < dim; ++r) {
    const int sr = std::popcount(r & z_mask);
    for (std::size_t c = 0; c < dim; ++c) {
      const int s = (sr + std::popcount(c & z_mask)) & 1;
      const Complex conj_term = data_[((r ^ x_mask) << n_) | (c ^ x_mask)];
      out[(r << n_) | c] = w * data_[(r << n_) | c] + (1.0 - w) * (s ? -conj_term : conj_term);
    }
  }
  data_.swap(out);
}

Complex DensityMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < dimension(); ++i) t += at(i, i);
  return t;
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> d(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) d[i] = at(i, i).real();
  return d;
}

}  // namespace cvarbound
