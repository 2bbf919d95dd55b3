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

#include "cvarbound/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cvarbound/errors.hpp"

namespace cvarbound {

PauliLindbladModel::PauliLindbladModel(int n, std::vector<NoiseTerm> terms) : n_(n) {
  for (auto& t : terms) add_term(t.pauli, t.lambda);
}

void PauliLindbladModel::add_term(const PauliString& pauli, double lambda) {
  if (pauli.num_qubits() != n_) {
    throw ValidationError("noise term " + pauli.label() + " has " +
                          std::to_string(pauli.num_qubits()) + " qubits, model has " +
                          std::to_string(n_));
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("noise term lambda must be finite and >= 0, got " +
                          std::to_string(lambda));
  }
  terms_.push_back({pauli.unsigned_copy(), lambda});
}

double PauliLindbladModel::total_lambda() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.lambda;
  return s;
}

double no_flip_weight(double lambda) { return 0.5 * (1.0 + std::exp(-2.0 * lambda)); }

std::vector<double> term_weights(const PauliLindbladModel& model) {
  std::vector<double> w;
  w.reserve(model.terms().size());
  for (const auto& t : model.terms()) w.push_back(no_flip_weight(t.lambda));
  return w;
}

double gamma(const PauliLindbladModel& model) { return std::exp(2.0 * model.total_lambda()); }

double layer_fidelity(const PauliLindbladModel& model) {
  return std::exp(-model.total_lambda());
}

double no_error_probability(const PauliLindbladModel& model) {
  double p = 1.0;
  for (const auto& t : model.terms()) p *= no_flip_weight(t.lambda);
  return p;
}

PauliLindbladModel concat(const PauliLindbladModel& a, const PauliLindbladModel& b) {
  if (a.num_qubits() != b.num_qubits()) throw ValidationError("concat: qubit count mismatch");
  PauliLindbladModel out = a;
  for (const auto& t : b.terms()) out.add_term(t.pauli, t.lambda);
  return out;
}

ErrorEvent sample_error(const PauliLindbladModel& model, Rng& rng, int layer) {
  ErrorEvent event;
  event.layer = layer;
  const auto& terms = model.terms();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const double fire = 1.0 - no_flip_weight(terms[k].lambda);
    if (uniform01(rng) < fire) {
      event.term_indices.push_back(k);
      event.applied.push_back(terms[k].pauli);
    }
  }
  return event;
}

DensityMatrix apply_channel_dense(const PauliLindbladModel& model, DensityMatrix rho,
                                  int dense_limit) {
  if (rho.num_qubits() != model.num_qubits()) {
    throw ValidationError("apply_channel_dense: density matrix has " +
                          std::to_string(rho.num_qubits()) + " qubits, model has " +
                          std::to_string(model.num_qubits()));
  }
  if (model.num_qubits() > dense_limit) {
    throw ResourceLimitError("apply_channel_dense: " + std::to_string(model.num_qubits()) +
                             " qubits exceeds dense limit " + std::to_string(dense_limit));
  }
  for (const auto& t : model.terms()) {
    rho.apply_pauli_mixture(low_word(t.pauli.x()), low_word(t.pauli.z()),
                            no_flip_weight(t.lambda));
  }
  return rho;
}

PauliString pauli_from_index(int n, std::size_t index) {
  QubitMask x, z;
  for (int q = 0; q < n; ++q) {
    switch ((index >> (2 * q)) & 3) {
      case 1: x.set(q); break;
      case 2: x.set(q); z.set(q); break;
      case 3: z.set(q); break;
      default: break;
    }
  }
  return PauliString(n, x, z);
}

Eigen::MatrixXcd pauli_matrix(const PauliString& p) {
  const int n = p.num_qubits();
  const std::size_t dim = std::size_t{1} << n;
  const std::uint64_t xm = low_word(p.x());
  const std::uint64_t zm = low_word(p.z());
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex global = kIPow[std::popcount(xm & zm) & 3] * static_cast<double>(p.sign());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double s = (std::popcount(j & zm) & 1) ? -1.0 : 1.0;
    m(j ^ xm, j) = global * s;
  }
  return m;
}

double TwirlResult::max_off_diagonal() const {
  double worst = 0.0;
  for (Eigen::Index a = 0; a < ptm.rows(); ++a) {
    for (Eigen::Index b = 0; b < ptm.cols(); ++b) {
      if (a != b) worst = std::max(worst, std::abs(ptm(a, b)));
    }
  }
  return worst;
}

TwirlResult twirl_channel_dense(std::span<const Eigen::MatrixXcd> kraus) {
  if (kraus.empty()) throw ValidationError("twirl_channel_dense: empty Kraus set");
  const Eigen::Index dim = kraus.front().rows();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n < 1 || n > 2) {
    throw ValidationError("twirl_channel_dense: Kraus operators must be 2x2 or 4x4");
  }
  Eigen::MatrixXcd completeness = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& k : kraus) {
    if (k.rows() != dim || k.cols() != dim) {
      throw ValidationError("twirl_channel_dense: Kraus operators differ in size");
    }
    completeness += k.adjoint() * k;
  }
  if ((completeness - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("twirl_channel_dense: Kraus set is not trace preserving");
  }

  const std::size_t num_paulis = std::size_t{1} << (2 * n);
  std::vector<Eigen::MatrixXcd> paulis;
  paulis.reserve(num_paulis);
  for (std::size_t j = 0; j < num_paulis; ++j) paulis.push_back(pauli_matrix(pauli_from_index(n, j)));

  auto twirled = [&](const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& p : paulis) {
      const Eigen::MatrixXcd in = p * rho * p;
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
      for (const auto& k : kraus) out += k * in * k.adjoint();
      acc += p * out * p;
    }
    return Eigen::MatrixXcd(acc / static_cast<double>(num_paulis));
  };

  TwirlResult result;
  result.n = n;
  result.ptm = Eigen::MatrixXd::Zero(num_paulis, num_paulis);
  for (std::size_t b = 0; b < num_paulis; ++b) {
    const Eigen::MatrixXcd image = twirled(paulis[b]);
    for (std::size_t a = 0; a < num_paulis; ++a) {
      result.ptm(a, b) = (paulis[a] * image).trace().real() / static_cast<double>(dim);
    }
  }
  result.error_probabilities.assign(num_paulis, 0.0);
  for (std::size_t j = 0; j < num_paulis; ++j) {
    const PauliString pj = pauli_from_index(n, j);
    double s = 0.0;
    for (std::size_t a = 0; a < num_paulis; ++a) {
      const double sign = commutes(pauli_from_index(n, a), pj) ? 1.0 : -1.0;
      s += sign * result.ptm(a, a);
    }
    result.error_probabilities[j] = s / static_cast<double>(num_paulis);
  }
  return result;
}

}  // namespace cvarbound
