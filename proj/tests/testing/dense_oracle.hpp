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

// Dense reference implementations used by the tests. Nothing here calls the
// library's evolution or CVaR code; only plain data types are shared.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "cvarbound/circuit.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Cx = std::complex<double>;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Mat pauli2(char c) {
  Mat m(2, 2);
  const Cx i(0, 1);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

// Label is most-significant qubit first; a leading sign is ignored.
inline Mat pauli_dense(std::string label) {
  if (!label.empty() && (label[0] == '+' || label[0] == '-')) label.erase(0, 1);
  Mat m = Mat::Identity(1, 1);
  for (char c : label) m = kron(m, pauli2(c));
  return m;
}

inline Mat gate_dense(const cvarbound::Gate& g) {
  using cvarbound::GateKind;
  const Cx i(0, 1);
  const double r = 1.0 / std::sqrt(2.0);
  Mat m(2, 2);
  switch (g.kind) {
    case GateKind::kI: return pauli2('I');
    case GateKind::kX: return pauli2('X');
    case GateKind::kY: return pauli2('Y');
    case GateKind::kZ: return pauli2('Z');
    case GateKind::kH: m << r, r, r, -r; return m;
    case GateKind::kS: m << 1, 0, 0, i; return m;
    case GateKind::kSdg: m << 1, 0, 0, -i; return m;
    case GateKind::kRz:
      // exp(-i a Z / 2)
      return (std::cos(g.angle / 2) * pauli2('I') - i * std::sin(g.angle / 2) * pauli2('Z')).eval();
    case GateKind::kRx:
      return (std::cos(g.angle / 2) * pauli2('I') - i * std::sin(g.angle / 2) * pauli2('X')).eval();
  }
  return pauli2('I');
}

inline Mat embed(int n, int qubit, const Mat& u) {
  return kron(kron(Mat::Identity(Eigen::Index{1} << (n - qubit - 1), Eigen::Index{1} << (n - qubit - 1)), u),
              Mat::Identity(Eigen::Index{1} << qubit, Eigen::Index{1} << qubit));
}

inline Mat cnot_dense(int n, int control, int target) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat m = Mat::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const Eigen::Index y = ((x >> control) & 1) ? (x ^ (Eigen::Index{1} << target)) : x;
    m(y, x) = 1.0;
  }
  return m;
}

inline Mat layer_dense(int n, const cvarbound::Layer& layer) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat u = Mat::Identity(dim, dim);
  if (const auto* s = std::get_if<cvarbound::SingleQubitLayer>(&layer)) {
    for (int q = 0; q < n; ++q) u = embed(n, q, gate_dense(s->gates[q])) * u;
  } else {
    for (const auto& pr : std::get<cvarbound::CnotLayer>(layer).pairs) {
      u = cnot_dense(n, pr.control, pr.target) * u;
    }
  }
  return u;
}

inline Mat unitary(const cvarbound::LayeredCircuit& c) {
  const int n = c.num_qubits();
  Mat u = Mat::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto& layer : c.layers()) u = layer_dense(n, layer) * u;
  return u;
}

inline Mat zero_state(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat rho = Mat::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return rho;
}

// rho -> w rho + (1 - w) P rho P for each term, w = (1 + exp(-2 lambda)) / 2.
inline Mat apply_noise(const Mat& rho_in, const cvarbound::PauliLindbladModel& model) {
  Mat rho = rho_in;
  for (const auto& t : model.terms()) {
    const double w = 0.5 * (1.0 + std::exp(-2.0 * t.lambda));
    const Mat p = pauli_dense(t.pauli.label());
    rho = w * rho + (1.0 - w) * p * rho * p.adjoint();
  }
  return rho;
}

// Noise acts before the layer unitary.
inline Mat noisy_state(const cvarbound::LayeredCircuit& c) {
  const int n = c.num_qubits();
  Mat rho = zero_state(n);
  for (const auto& layer : c.layers()) {
    if (const auto* cl = std::get_if<cvarbound::CnotLayer>(&layer); cl && cl->noise) {
      rho = apply_noise(rho, *cl->noise);
    }
    const Mat u = layer_dense(n, layer);
    rho = u * rho * u.adjoint();
  }
  return rho;
}

inline std::vector<double> diag(const Mat& rho) {
  std::vector<double> d(rho.rows());
  for (Eigen::Index i = 0; i < rho.rows(); ++i) d[i] = rho(i, i).real();
  return d;
}

inline std::vector<double> ideal_probs(const cvarbound::LayeredCircuit& c) {
  const Mat u = unitary(c);
  std::vector<double> p(u.rows());
  for (Eigen::Index i = 0; i < u.rows(); ++i) p[i] = std::norm(u(i, 0));
  return p;
}

// Lower CVaR by the Rockafellar-Uryasev variational form, maximized over the
// support points (the optimum is attained at an atom).
inline double cvar_lower_ru(const std::vector<double>& support, const std::vector<double>& probs,
                            double alpha) {
  double best = -INFINITY;
  for (double t : support) {
    double shortfall = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      shortfall += probs[i] * std::max(t - support[i], 0.0);
    }
    best = std::max(best, t - shortfall / alpha);
  }
  return best;
}

inline double cvar_upper_ru(const std::vector<double>& support, const std::vector<double>& probs,
                            double alpha) {
  std::vector<double> neg(support.size());
  std::transform(support.begin(), support.end(), neg.begin(), [](double v) { return -v; });
  return -cvar_lower_ru(neg, probs, alpha);
}

// Mean of the k smallest (or largest) values.
inline double order_mean(std::vector<double> values, std::size_t k, bool upper) {
  std::sort(values.begin(), values.end());
  if (upper) std::reverse(values.begin(), values.end());
  return std::accumulate(values.begin(), values.begin() + k, 0.0) / static_cast<double>(k);
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// True when a and b agree up to a global phase.
inline double phase_distance(const Mat& a, const Mat& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const Cx phase = a(r, c) / b(r, c);
  return max_abs(a - phase * b);
}

}  // namespace oracle
