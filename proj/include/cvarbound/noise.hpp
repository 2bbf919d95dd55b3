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

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cvarbound/pauli.hpp"
#include "cvarbound/random.hpp"
#include "cvarbound/state.hpp"

namespace cvarbound {

inline constexpr int kDefaultDenseLimit = 10;

struct NoiseTerm {
  PauliString pauli;
  double lambda = 0.0;
};

/// Pauli-Lindblad channel: a product over terms of
/// rho -> w_k rho + (1 - w_k) P_k rho P_k with w_k = (1 + e^{-2 lambda_k}) / 2.
class PauliLindbladModel {
 public:
  PauliLindbladModel() = default;
  explicit PauliLindbladModel(int n) : n_(n) {}
  PauliLindbladModel(int n, std::vector<NoiseTerm> terms);

  int num_qubits() const { return n_; }
  const std::vector<NoiseTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(const PauliString& pauli, double lambda);
  double total_lambda() const;

 private:
  int n_ = 0;
  std::vector<NoiseTerm> terms_;
};

/// w = (1 + e^{-2 lambda}) / 2, the weight of the no-flip branch.
double no_flip_weight(double lambda);
std::vector<double> term_weights(const PauliLindbladModel& model);

/// e^{2 sum lambda_k}.
double gamma(const PauliLindbladModel& model);
/// 1 / sqrt(gamma).
double layer_fidelity(const PauliLindbladModel& model);
/// prod_k w_k, the exact probability that no term fires.
double no_error_probability(const PauliLindbladModel& model);

PauliLindbladModel concat(const PauliLindbladModel& a, const PauliLindbladModel& b);

struct ErrorEvent {
  int layer = 0;
  std::vector<std::size_t> term_indices;
  std::vector<PauliString> applied;

  bool empty() const { return term_indices.empty(); }
};

/// Each term fires independently with probability 1 - w_k.
ErrorEvent sample_error(const PauliLindbladModel& model, Rng& rng, int layer = 0);

/// Applies every term's mixing map in order. Terms commute as maps, so the
/// order does not affect the result.
DensityMatrix apply_channel_dense(const PauliLindbladModel& model, DensityMatrix rho,
                                  int dense_limit = kDefaultDenseLimit);

/// Pauli basis index: two bits per qubit, 0 = I, 1 = X, 2 = Y, 3 = Z.
PauliString pauli_from_index(int n, std::size_t index);
Eigen::MatrixXcd pauli_matrix(const PauliString& p);

struct TwirlResult {
  int n = 0;
  /// Normalized Pauli transfer matrix of the averaged channel,
  /// R_ab = tr(P_a T(P_b)) / 2^n.
  Eigen::MatrixXd ptm;
  /// Probability of each Pauli error, indexed as in pauli_from_index.
  std::vector<double> error_probabilities;

  double max_off_diagonal() const;
};

/// Averages the channel with Kraus operators `kraus` over conjugation by all
/// 4^n Paulis (n <= 2) and returns the resulting Pauli channel.
TwirlResult twirl_channel_dense(std::span<const Eigen::MatrixXcd> kraus);

}  // namespace cvarbound
