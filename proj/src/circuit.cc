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

#include "cvarbound/circuit.hpp"

#include <cmath>

#include "cvarbound/errors.hpp"

namespace cvarbound {

namespace {

const Complex kI{0.0, 1.0};

void check_qubit(int n, int q) {
  if (q < 0 || q >= n) {
    throw ValidationError("qubit index " + std::to_string(q) + " out of range for " +
                          std::to_string(n) + " qubits");
  }
}

}  // namespace

Matrix2 gate_matrix(const Gate& g) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::kI: return {1.0, 0.0, 0.0, 1.0};
    case GateKind::kH: return {r, r, r, -r};
    case GateKind::kX: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::kY: return {0.0, -kI, kI, 0.0};
    case GateKind::kZ: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::kS: return {1.0, 0.0, 0.0, kI};
    case GateKind::kSdg: return {1.0, 0.0, 0.0, -kI};
    case GateKind::kRz:
      return {std::exp(-kI * (g.angle / 2)), 0.0, 0.0, std::exp(kI * (g.angle / 2))};
    case GateKind::kRx: {
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      return {c, -kI * s, -kI * s, c};
    }
  }
  throw ValidationError("unknown gate kind");
}

Gate inverse(const Gate& g) {
  switch (g.kind) {
    case GateKind::kS: return {GateKind::kSdg, 0.0};
    case GateKind::kSdg: return {GateKind::kS, 0.0};
    case GateKind::kRz:
    case GateKind::kRx: return {g.kind, -g.angle};
    default: return g;
  }
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kI: return "I";
    case GateKind::kH: return "H";
    case GateKind::kX: return "X";
    case GateKind::kY: return "Y";
    case GateKind::kZ: return "Z";
    case GateKind::kS: return "S";
    case GateKind::kSdg: return "Sdg";
    case GateKind::kRz: return "Rz";
    case GateKind::kRx: return "Rx";
  }
  return "?";
}

GateKind parse_gate_kind(const std::string& name) {
  static const std::map<std::string, GateKind> kNames = {
      {"I", GateKind::kI},   {"H", GateKind::kH},     {"X", GateKind::kX},
      {"Y", GateKind::kY},   {"Z", GateKind::kZ},     {"S", GateKind::kS},
      {"Sdg", GateKind::kSdg}, {"Rz", GateKind::kRz}, {"Rx", GateKind::kRx}};
  auto it = kNames.find(name);
  if (it == kNames.end()) throw ValidationError("unknown gate '" + name + "'");
  return it->second;
}

Gate pauli_gate(char p) {
  switch (p) {
    case 'I': return {GateKind::kI, 0.0};
    case 'X': return {GateKind::kX, 0.0};
    case 'Y': return {GateKind::kY, 0.0};
    case 'Z': return {GateKind::kZ, 0.0};
  }
  throw ValidationError(std::string("not a Pauli: ") + p);
}

LayeredCircuit::LayeredCircuit(int n) : n_(n) {
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("circuit qubit count must be in [1, " + std::to_string(kMaxQubits) +
                          "], got " + std::to_string(n));
  }
}

void LayeredCircuit::add_layer(SingleQubitLayer layer) {
  if (static_cast<int>(layer.gates.size()) != n_) {
    throw ValidationError("single-qubit layer has " + std::to_string(layer.gates.size()) +
                          " gates, circuit has " + std::to_string(n_) + " qubits");
  }
  for (const auto& g : layer.gates) {
    if (!std::isfinite(g.angle)) throw ValidationError("gate angle must be finite");
  }
  layers_.push_back(std::move(layer));
}

void LayeredCircuit::add_layer(CnotLayer layer) {
  validate_cnot_layer(n_, layer.pairs);
  if (layer.noise && layer.noise->num_qubits() != n_) {
    throw ValidationError("noise model has " + std::to_string(layer.noise->num_qubits()) +
                          " qubits, circuit has " + std::to_string(n_));
  }
  layers_.push_back(std::move(layer));
}

void LayeredCircuit::add_uniform(const Gate& g) {
  add_layer(SingleQubitLayer{std::vector<Gate>(n_, g)});
}

void LayeredCircuit::add_gate(int qubit, const Gate& g) {
  check_qubit(n_, qubit);
  SingleQubitLayer layer{std::vector<Gate>(n_)};
  layer.gates[qubit] = g;
  add_layer(std::move(layer));
}

void LayeredCircuit::add_cnots(std::vector<CnotPair> pairs, std::string label) {
  add_layer(CnotLayer{std::move(pairs), std::nullopt, std::move(label)});
}

void LayeredCircuit::append(const LayeredCircuit& other) {
  if (other.n_ != n_) throw ValidationError("append: qubit count mismatch");
  layers_.insert(layers_.end(), other.layers_.begin(), other.layers_.end());
}

LayeredCircuit LayeredCircuit::inverse() const {
  LayeredCircuit out(n_);
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
    if (const auto* one = std::get_if<SingleQubitLayer>(&*it)) {
      SingleQubitLayer inv;
      for (const auto& g : one->gates) inv.gates.push_back(cvarbound::inverse(g));
      out.layers_.push_back(std::move(inv));
    } else {
      out.layers_.push_back(*it);
    }
  }
  return out;
}

double total_gamma(const LayeredCircuit& circuit) {
  double lambda = 0.0;
  for (const auto& layer : circuit.layers()) {
    if (const auto* c = std::get_if<CnotLayer>(&layer); c && c->noise) {
      lambda += c->noise->total_lambda();
    }
  }
  return std::exp(2.0 * lambda);
}

CircuitStats stats(const LayeredCircuit& circuit) {
  CircuitStats s;
  for (const auto& layer : circuit.layers()) {
    const auto* c = std::get_if<CnotLayer>(&layer);
    if (!c || c->pairs.empty()) continue;
    const int count = static_cast<int>(c->pairs.size());
    s.cnot_count += count;
    s.cnot_depth += 1;
    s.per_class[c->label] += count;
  }
  return s;
}

TwirledCircuit apply_pauli_twirl(const LayeredCircuit& circuit,
                                 std::span<const PauliString> twirls) {
  const int n = circuit.num_qubits();
  TwirledCircuit out{LayeredCircuit(n), 1};
  std::size_t next = 0;
  for (const auto& layer : circuit.layers()) {
    const auto* c = std::get_if<CnotLayer>(&layer);
    if (!c) {
      out.circuit.add_layer(std::get<SingleQubitLayer>(layer));
      continue;
    }
    if (next >= twirls.size()) {
      throw ValidationError("apply_pauli_twirl: fewer twirls than CNOT layers");
    }
    const PauliString p = twirls[next++].unsigned_copy();
    if (p.num_qubits() != n) throw ValidationError("apply_pauli_twirl: twirl qubit count mismatch");
    if (p.is_identity()) {
      out.circuit.add_layer(*c);
      continue;
    }
    const PauliString q = conjugate_through_cnot_layer(p, c->pairs);
    SingleQubitLayer before, after;
    for (int i = 0; i < n; ++i) {
      before.gates.push_back(pauli_gate(p.at(i)));
      after.gates.push_back(pauli_gate(q.at(i)));
    }
    out.circuit.add_layer(std::move(before));
    out.circuit.add_layer(*c);
    out.circuit.add_layer(std::move(after));
    out.sign *= q.sign();
  }
  if (next != twirls.size()) {
    throw ValidationError("apply_pauli_twirl: more twirls than CNOT layers");
  }
  return out;
}

TwirledCircuit insert_pauli_twirl(const LayeredCircuit& circuit, Rng& rng) {
  const int n = circuit.num_qubits();
  std::vector<PauliString> twirls;
  for (const auto& layer : circuit.layers()) {
    if (!std::holds_alternative<CnotLayer>(layer)) continue;
    QubitMask x, z;
    for (int q = 0; q < n; ++q) {
      const auto v = rng() & 3;
      x[q] = v & 1;
      z[q] = (v >> 1) & 1;
    }
    twirls.emplace_back(n, x, z);
  }
  return apply_pauli_twirl(circuit, twirls);
}

PauliLindbladModel uniform_cnot_noise(int n, std::span<const CnotPair> pairs,
                                      double lambda_per_cnot) {
  PauliLindbladModel model(n);
  static const char kPaulis[] = {'I', 'X', 'Y', 'Z'};
  for (const auto& pair : pairs) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        if (a == 0 && b == 0) continue;
        const PauliString pc = PauliString::single(n, pair.control, kPaulis[a]);
        const PauliString pt = PauliString::single(n, pair.target, kPaulis[b]);
        model.add_term(compose(pc, pt), lambda_per_cnot / 15.0);
      }
    }
  }
  return model;
}

LayeredCircuit with_uniform_cnot_noise(const LayeredCircuit& circuit, double lambda_per_cnot) {
  LayeredCircuit out = circuit;
  for (auto& layer : out.mutable_layers()) {
    if (auto* c = std::get_if<CnotLayer>(&layer); c && !c->pairs.empty()) {
      c->noise = uniform_cnot_noise(circuit.num_qubits(), c->pairs, lambda_per_cnot);
    }
  }
  return out;
}

void append_basis_rotation(LayeredCircuit& circuit, std::span<const BasisRotation> rotation) {
  const int n = circuit.num_qubits();
  if (static_cast<int>(rotation.size()) != n) {
    throw ValidationError("basis rotation length does not match qubit count");
  }
  SingleQubitLayer sdg{std::vector<Gate>(n)}, h{std::vector<Gate>(n)};
  bool any_sdg = false, any_h = false;
  for (int q = 0; q < n; ++q) {
    if (rotation[q] == BasisRotation::kHSdg) {
      sdg.gates[q] = {GateKind::kSdg, 0.0};
      any_sdg = true;
    }
    if (rotation[q] != BasisRotation::kNone) {
      h.gates[q] = {GateKind::kH, 0.0};
      any_h = true;
    }
  }
  if (any_sdg) circuit.add_layer(std::move(sdg));
  if (any_h) circuit.add_layer(std::move(h));
}

}  // namespace cvarbound
