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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvarbound/circuit.hpp"
#include "cvarbound/pauli.hpp"
#include "cvarbound/simulator.hpp"

namespace cvarbound {

inline constexpr int kBruteForceLimit = 24;

enum class Sense { kMinimize, kMaximize };

std::string sense_name(Sense sense);
Sense parse_sense(const std::string& name);

/// Polynomial in spins z_i = 1 - 2 x_i with at most cubic terms.
struct IsingPolynomial {
  int n = 0;
  Sense sense = Sense::kMinimize;
  double offset = 0.0;
  std::map<int, double> linear;
  std::map<std::pair<int, int>, double> quadratic;
  std::map<std::array<int, 3>, double> cubic;

  void add_linear(int v, double c);
  void add_quadratic(int i, int j, double c);
  void add_cubic(int a, int b, int c, double coefficient);
  void validate() const;

  double evaluate(Bitstring x) const;
  /// h(x) for every x; n <= kBruteForceLimit.
  std::vector<double> diagonal() const;
  /// Spin-dependent part only, without the offset. Used for phases.
  std::vector<double> phase_diagonal() const;
  /// Z-type Pauli strings; the offset becomes an identity term.
  std::vector<WeightedPauli> to_pauli_terms() const;
};

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, sorted

  std::vector<std::vector<int>> adjacency() const;
  std::vector<int> degrees() const;
};

IsingPolynomial maxcut_polynomial(const Graph& graph);

struct MaxcutInstance {
  Graph graph;
  IsingPolynomial polynomial;
};

MaxcutInstance maxcut_3regular(int nodes, std::uint64_t seed);

struct HeavyHexInstance {
  int rows = 0;
  int width = 0;
  Graph graph;
  std::vector<int> v2;  // degree <= 2 side, parity targets
  std::vector<int> v3;  // the other side, parity controls
  std::vector<int> w;   // degree-2 vertices of v2, one cubic term each
  std::vector<int> edge_color;  // parallel to graph.edges, values 0..2
  IsingPolynomial polynomial;
};

/// Heavy-hex patch with `rows` rows of `width` qubits (width % 4 == 3)
/// joined by bridge qubits every fourth column. rows = 7, width = 15 gives
/// the 127-qubit layout.
Graph heavy_hex_lattice(int rows, int width);
HeavyHexInstance heavy_hex_instance(int rows, int width, std::uint64_t seed);
/// Presets: "127" (7 x 15) and "small" (2 x 7, 14 qubits).
HeavyHexInstance heavy_hex_preset(const std::string& name, std::uint64_t seed);

/// Proper edge coloring with max-degree colors for a bipartite graph.
std::vector<int> bipartite_edge_coloring(const Graph& graph);

struct QaoaParams {
  int p = 1;
  std::vector<double> gammas;
  std::vector<double> betas;

  void validate() const;
};

/// Published 40-qubit angles for p = 1 and p = 2.
QaoaParams published_angles(int p);

inline constexpr double kHeavyHexReferenceOptimum = -188.0;

/// exp(-i gamma H) as CNOT / Rz gates, generic layout.
LayeredCircuit phase_separator(const IsingPolynomial& poly, double gamma);
/// exp(-i gamma H) with three CNOT-layer classes, each used twice.
LayeredCircuit heavy_hex_phase_separator(const HeavyHexInstance& instance, double gamma);

LayeredCircuit build_qaoa(const IsingPolynomial& poly, const QaoaParams& params);
LayeredCircuit build_qaoa_heavy_hex(const HeavyHexInstance& instance, const QaoaParams& params);

struct BruteForceResult {
  double best = 0.0;
  Bitstring argbest = 0;
  std::map<double, std::uint64_t> histogram;
};

BruteForceResult brute_force(const IsingPolynomial& poly, int threads = 1,
                             int limit = kBruteForceLimit);

/// Worst-case QAOA ratio for MAXCUT on 3-regular graphs, p in {1, 2, 3}.
std::optional<double> approximation_guarantee(int p);

struct ApproximationCheck {
  double ratio = 0.0;
  std::optional<double> guarantee;
  bool passes = true;
};

double approximation_ratio(double value, double optimum);
ApproximationCheck check_approximation(double value, double optimum, int p);

/// Noise-free expectation of the polynomial after a p = 1 round started
/// from |+>, evaluated directly on the diagonal.
double qaoa_p1_expectation(const IsingPolynomial& poly, double gamma, double beta);

struct GridResult {
  double gamma = 0.0;
  double beta = 0.0;
  double expectation = 0.0;
};

/// gamma over [0, 2 pi), beta over [0, pi / 2), best for poly.sense.
GridResult grid_search_p1(const IsingPolynomial& poly, int steps = 64, int threads = 1);

}  // namespace cvarbound
