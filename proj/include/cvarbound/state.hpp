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

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace cvarbound {

using Complex = std::complex<double>;
/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Matrix2 = std::array<Complex, 4>;

/// Pure state on n qubits; amplitude index bit q is qubit q.
class Statevector {
 public:
  explicit Statevector(int n);  // |0...0>
  Statevector(int n, std::vector<Complex> amplitudes);

  int num_qubits() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

  void apply_1q(int qubit, const Matrix2& u);
  void apply_cnot(int control, int target);
  /// Applies the Pauli with the given X/Z masks (Y where both set).
  void apply_pauli(std::uint64_t x_mask, std::uint64_t z_mask);

  double norm_squared() const;
  std::vector<double> probabilities() const;

 private:
  int n_;
  std::vector<Complex> amps_;
};

/// Dense density matrix; element (r, c) is stored at (r << n) | c.
class DensityMatrix {
 public:
  explicit DensityMatrix(int n);  // |0...0><0...0|
  static DensityMatrix from_statevector(const Statevector& psi);

  int num_qubits() const { return n_; }
  std::size_t dimension() const { return std::size_t{1} << n_; }
  Complex at(std::size_t r, std::size_t c) const { return data_[(r << n_) | c]; }
  Complex& at(std::size_t r, std::size_t c) { return data_[(r << n_) | c]; }

  /// rho -> U rho U^dagger on one qubit.
  void apply_1q(int qubit, const Matrix2& u);
  void apply_cnot(int control, int target);
  /// rho -> w rho + (1 - w) P rho P.
  void apply_pauli_mixture(std::uint64_t x_mask, std::uint64_t z_mask, double w);

  Complex trace() const;
  std::vector<double> diagonal() const;

 private:
  int n_;
  std::vector<Complex> data_;
};

}  // namespace cvarbound
