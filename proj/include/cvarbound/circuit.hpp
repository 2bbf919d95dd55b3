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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cvarbound/noise.hpp"
#include "cvarbound/pauli.hpp"
#include "cvarbound/random.hpp"
#include "cvarbound/state.hpp"

namespace cvarbound {

enum class GateKind { kI, kH, kX, kY, kZ, kS, kSdg, kRz, kRx };

struct Gate {
  GateKind kind = GateKind::kI;
  double angle = 0.0;  // radians, used by kRz and kRx

  friend bool operator==(const Gate&, const Gate&) = default;
};

Matrix2 gate_matrix(const Gate& g);
Gate inverse(const Gate& g);
std::string gate_name(GateKind kind);
GateKind parse_gate_kind(const std::string& name);
/// Pauli gate for 'I', 'X', 'Y' or 'Z'.
Gate pauli_gate(char p);

struct SingleQubitLayer {
  std::vector<Gate> gates;  // one per qubit
};

struct CnotLayer {
  std::vector<CnotPair> pairs;
  std::optional<PauliLindbladModel> noise;
  std::string label;
};

using Layer = std::variant<SingleQubitLayer, CnotLayer>;

class LayeredCircuit {
 public:
  LayeredCircuit() = default;
  explicit LayeredCircuit(int n);

  int num_qubits() const { return n_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }

  void add_layer(SingleQubitLayer layer);
  void add_layer(CnotLayer layer);
  /// Layer with `g` on every qubit.
  void add_uniform(const Gate& g);
  /// Layer with `g` on `qubit` only.
  void add_gate(int qubit, const Gate& g);
  void add_cnots(std::vector<CnotPair> pairs, std::string label = {});
  void append(const LayeredCircuit& other);

  /// Layers reversed with every gate inverted. Attached noise stays with its
  /// CNOT layer.
  LayeredCircuit inverse() const;

 private:
  int n_ = 0;
  std::vector<Layer> layers_;
};

double total_gamma(const LayeredCircuit& circuit);

struct CircuitStats {
  int cnot_count = 0;
  int cnot_depth = 0;
  std::map<std::string, int> per_class;
};

CircuitStats stats(const LayeredCircuit& circuit);

struct TwirledCircuit {
  LayeredCircuit circuit;
  int sign = 1;
};

/// Twirls CNOT layer i with twirls[i] (unsigned, length = number of CNOT
/// layers). Identity twirls insert nothing.
TwirledCircuit apply_pauli_twirl(const LayeredCircuit& circuit,
                                 std::span<const PauliString> twirls);
TwirledCircuit insert_pauli_twirl(const LayeredCircuit& circuit, Rng& rng);

/// Every non-identity two-qubit Pauli on each CNOT's qubits, 15 terms of
/// lambda_per_cnot / 15 each, so one CNOT contributes exp(2 lambda) to gamma.
PauliLindbladModel uniform_cnot_noise(int n, std::span<const CnotPair> pairs,
                                      double lambda_per_cnot);
/// Replaces the noise on every non-empty CNOT layer.
LayeredCircuit with_uniform_cnot_noise(const LayeredCircuit& circuit, double lambda_per_cnot);

void append_basis_rotation(LayeredCircuit& circuit, std::span<const BasisRotation> rotation);

}  // namespace cvarbound
