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

#include "cvarbound/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>

#include "cvarbound/errors.hpp"
#include "cvarbound/random.hpp"

namespace cvarbound {

namespace {

void check_index(int n, int v) {
  if (v < 0 || v >= n) {
    throw ValidationError("variable index " + std::to_string(v) + " out of range for n = " +
                          std::to_string(n));
  }
}

void check_coefficient(double c) {
  if (!std::isfinite(c)) throw ValidationError("coefficients must be finite");
}

std::vector<DiagonalTerm> spin_terms(const IsingPolynomial& poly) {
  std::vector<DiagonalTerm> terms;
  for (const auto& [v, c] : poly.linear) {
    QubitMask m;
    m.set(v);
    terms.push_back({m, c});
  }
  for (const auto& [ij, c] : poly.quadratic) {
    QubitMask m;
    m.set(ij.first);
    m.set(ij.second);
    terms.push_back({m, c});
  }
  for (const auto& [abc, c] : poly.cubic) {
    QubitMask m;
    for (int v : abc) m.set(v);
    terms.push_back({m, c});
  }
  return terms;
}

std::vector<double> diagonal_of(const IsingPolynomial& poly, double offset) {
  if (poly.n > kBruteForceLimit) {
    throw ResourceLimitError("diagonal of " + std::to_string(poly.n) +
                             " variables exceeds the limit of " +
                             std::to_string(kBruteForceLimit));
  }
  const std::size_t dim = std::size_t{1} << poly.n;
  std::vector<double> d(dim, offset);
  for (const auto& t : spin_terms(poly)) {
    const std::uint64_t mask = low_word(t.mask);
    for (std::size_t x = 0; x < dim; ++x) {
      d[x] += (std::popcount(x & mask) & 1) ? -t.coefficient : t.coefficient;
    }
  }
  return d;
}

bool better(Sense sense, double a, double b) {
  return sense == Sense::kMaximize ? a > b : a < b;
}

// Greedily packs gate groups into rounds whose qubit sets are disjoint.
std::vector<std::vector<std::size_t>> pack_disjoint(
    const std::vector<std::vector<int>>& qubit_sets) {
  std::vector<std::vector<std::size_t>> rounds;
  std::vector<bool> placed(qubit_sets.size(), false);
  std::size_t left = qubit_sets.size();
  while (left > 0) {
    std::set<int> used;
    std::vector<std::size_t> round;
    for (std::size_t i = 0; i < qubit_sets.size(); ++i) {
      if (placed[i]) continue;
      bool clash = false;
      for (int q : qubit_sets[i]) clash = clash || used.count(q);
      if (clash) continue;
      used.insert(qubit_sets[i].begin(), qubit_sets[i].end());
      round.push_back(i);
      placed[i] = true;
      --left;
    }
    rounds.push_back(std::move(round));
  }
  return rounds;
}

SingleQubitLayer rz_layer(int n, const std::vector<double>& angles) {
  SingleQubitLayer layer{std::vector<Gate>(n)};
  for (int q = 0; q < n; ++q) {
    if (angles[q] != 0.0) layer.gates[q] = {GateKind::kRz, angles[q]};
  }
  return layer;
}

bool any_nonzero(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(), [](double a) { return a != 0.0; });
}

void append_linear(LayeredCircuit& c, const IsingPolynomial& poly, double gamma) {
  std::vector<double> angles(poly.n, 0.0);
  for (const auto& [v, d] : poly.linear) angles[v] += 2.0 * gamma * d;
  if (any_nonzero(angles)) c.add_layer(rz_layer(poly.n, angles));
}

}  // namespace

std::string sense_name(Sense sense) {
  return sense == Sense::kMinimize ? "minimize" : "maximize";
}

Sense parse_sense(const std::string& name) {
  if (name == "minimize" || name == "min") return Sense::kMinimize;
  if (name == "maximize" || name == "max") return Sense::kMaximize;
  throw ValidationError("sense must be 'minimize' or 'maximize', got '" + name + "'");
}

void IsingPolynomial::add_linear(int v, double c) {
  check_index(n, v);
  check_coefficient(c);
  linear[v] += c;
}

void IsingPolynomial::add_quadratic(int i, int j, double c) {
  check_index(n, i);
  check_index(n, j);
  check_coefficient(c);
  if (i == j) throw ValidationError("quadratic term needs two distinct variables");
  quadratic[{std::min(i, j), std::max(i, j)}] += c;
}

void IsingPolynomial::add_cubic(int a, int b, int c, double coefficient) {
  check_index(n, a);
  check_index(n, b);
  check_index(n, c);
  check_coefficient(coefficient);
  std::array<int, 3> key{a, b, c};
  std::sort(key.begin(), key.end());
  if (key[0] == key[1] || key[1] == key[2]) {
    throw ValidationError("cubic term needs three distinct variables");
  }
  cubic[key] += coefficient;
}

void IsingPolynomial::validate() const {
  if (n < 1 || n > kMaxQubits) throw ValidationError("polynomial n must lie in [1, 128]");
  check_coefficient(offset);
  for (const auto& [v, c] : linear) {
    check_index(n, v);
    check_coefficient(c);
  }
  for (const auto& [ij, c] : quadratic) {
    check_index(n, ij.first);
    check_index(n, ij.second);
    if (ij.first >= ij.second) throw ValidationError("quadratic indices must be sorted");
    check_coefficient(c);
  }
  for (const auto& [abc, c] : cubic) {
    for (int v : abc) check_index(n, v);
    if (!(abc[0] < abc[1] && abc[1] < abc[2])) {
      throw ValidationError("cubic indices must be sorted and distinct");
    }
    check_coefficient(c);
  }
}

double IsingPolynomial::evaluate(Bitstring x) const {
  if (n < 64 && (x >> n) != 0) {
    throw ValidationError("bitstring has bits beyond n = " + std::to_string(n));
  }
  auto z = [x](int v) { return ((x >> v) & 1) ? -1.0 : 1.0; };
  double value = offset;
  for (const auto& [v, c] : linear) value += c * z(v);
  for (const auto& [ij, c] : quadratic) value += c * z(ij.first) * z(ij.second);
  for (const auto& [abc, c] : cubic) value += c * z(abc[0]) * z(abc[1]) * z(abc[2]);
  return value;
}

std::vector<double> IsingPolynomial::diagonal() const { return diagonal_of(*this, offset); }

std::vector<double> IsingPolynomial::phase_diagonal() const { return diagonal_of(*this, 0.0); }

std::vector<WeightedPauli> IsingPolynomial::to_pauli_terms() const {
  std::vector<WeightedPauli> out;
  if (offset != 0.0) out.push_back({PauliString(n), offset});
  for (const auto& t : spin_terms(*this)) {
    out.push_back({PauliString(n, QubitMask{}, t.mask), t.coefficient});
  }
  return out;
}

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(n, 0);
  for (const auto& [a, b] : edges) {
    ++d[a];
    ++d[b];
  }
  return d;
}

IsingPolynomial maxcut_polynomial(const Graph& graph) {
  // cut(x) = sum over edges of (1 - z_i z_j) / 2.
  IsingPolynomial poly;
  poly.n = graph.n;
  poly.sense = Sense::kMaximize;
  poly.offset = 0.5 * static_cast<double>(graph.edges.size());
  for (const auto& [a, b] : graph.edges) poly.add_quadratic(a, b, -0.5);
  return poly;
}

MaxcutInstance maxcut_3regular(int nodes, std::uint64_t seed) {
  if (nodes < 4 || nodes % 2 != 0) {
    throw ValidationError("3-regular graphs need an even node count >= 4, got " +
                          std::to_string(nodes));
  }
  if (nodes > kMaxQubits) throw ValidationError("node count exceeds 128");
  Rng rng = make_stream(seed, {5});
  std::vector<int> stubs;
  for (int v = 0; v < nodes; ++v) stubs.insert(stubs.end(), {v, v, v});
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> edges;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size() && ok; i += 2) {
      const int a = std::min(stubs[i], stubs[i + 1]);
      const int b = std::max(stubs[i], stubs[i + 1]);
      ok = a != b && edges.insert({a, b}).second;
    }
    if (!ok) continue;
    MaxcutInstance out;
    out.graph.n = nodes;
    out.graph.edges.assign(edges.begin(), edges.end());
    out.polynomial = maxcut_polynomial(out.graph);
    return out;
  }
  throw ValidationError("could not draw a simple 3-regular graph");
}

Graph heavy_hex_lattice(int rows, int width) {
  if (rows < 2 || width < 3 || width % 4 != 3) {
    throw ValidationError("heavy-hex lattice needs rows >= 2 and width % 4 == 3");
  }
  auto bridged = [](int gap, int col) { return col % 4 == (gap % 2 == 0 ? 0 : 2); };
  // The unbridged end qubit of the first and last rows is left out.
  const int last_gap = rows - 2;
  const int drop_last = bridged(last_gap, 0) ? width - 1 : 0;
  std::vector<std::vector<int>> id(rows, std::vector<int>(width, -1));
  std::vector<std::vector<int>> bridge(rows - 1, std::vector<int>(width, -1));
  int next = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < width; ++c) {
      if (r == 0 && c == width - 1) continue;
      if (r == rows - 1 && c == drop_last) continue;
      id[r][c] = next++;
    }
    if (r + 1 < rows) {
      for (int c = 0; c < width; ++c) {
        if (bridged(r, c)) bridge[r][c] = next++;
      }
    }
  }
  Graph g;
  g.n = next;
  auto link = [&](int a, int b) { g.edges.emplace_back(std::min(a, b), std::max(a, b)); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < width; ++c) {
      if (id[r][c] >= 0 && id[r][c + 1] >= 0) link(id[r][c], id[r][c + 1]);
    }
    if (r + 1 < rows) {
      for (int c = 0; c < width; ++c) {
        if (bridge[r][c] < 0) continue;
        link(id[r][c], bridge[r][c]);
        link(bridge[r][c], id[r + 1][c]);
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<int> bipartite_edge_coloring(const Graph& graph) {
  const auto deg = graph.degrees();
  const int colors = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  const std::size_t m = graph.edges.size();
  std::vector<int> color(m, -1);
  // at[v][c] = edge of color c at v, or -1.
  std::vector<std::vector<int>> at(graph.n, std::vector<int>(colors, -1));
  auto free_color = [&](int v) {
    for (int c = 0; c < colors; ++c) {
      if (at[v][c] < 0) return c;
    }
    throw ValidationError("edge coloring: no free color");
  };
  auto other = [&](int e, int v) {
    return graph.edges[e].first == v ? graph.edges[e].second : graph.edges[e].first;
  };
  for (std::size_t e = 0; e < m; ++e) {
    const auto [u, v] = graph.edges[e];
    const int a = free_color(u);
    if (at[v][a] >= 0) {
      // Swap colors a and b along the alternating path leaving v on a.
      const int b = free_color(v);
      std::vector<int> path;
      int x = v, want = a;
      while (at[x][want] >= 0) {
        const int f = at[x][want];
        path.push_back(f);
        x = other(f, x);
        want = want == a ? b : a;
      }
      for (int f : path) {
        at[graph.edges[f].first][color[f]] = -1;
        at[graph.edges[f].second][color[f]] = -1;
      }
      for (int f : path) {
        color[f] = color[f] == a ? b : a;
        at[graph.edges[f].first][color[f]] = f;
        at[graph.edges[f].second][color[f]] = f;
      }
      if (at[u][a] >= 0 || at[v][a] >= 0) {
        throw ValidationError("edge coloring failed; graph is not bipartite");
      }
    }
    color[e] = a;
    at[u][a] = static_cast<int>(e);
    at[v][a] = static_cast<int>(e);
  }
  return color;
}

HeavyHexInstance heavy_hex_instance(int rows, int width, std::uint64_t seed) {
  HeavyHexInstance inst;
  inst.rows = rows;
  inst.width = width;
  inst.graph = heavy_hex_lattice(rows, width);
  const auto deg = inst.graph.degrees();
  const auto adj = inst.graph.adjacency();

  // Two-coloring from vertex 0; v3 is the side holding the degree-3 vertices.
  std::vector<int> side(inst.graph.n, -1);
  side[0] = 0;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adj[v]) {
      if (side[u] < 0) {
        side[u] = 1 - side[v];
        stack.push_back(u);
      } else if (side[u] == side[v]) {
        throw ValidationError("heavy-hex lattice is not bipartite");
      }
    }
  }
  int heavy_side = 0;
  for (int v = 0; v < inst.graph.n; ++v) {
    if (deg[v] == 3) heavy_side = side[v];
  }
  for (int v = 0; v < inst.graph.n; ++v) {
    if (side[v] == heavy_side) {
      inst.v3.push_back(v);
    } else {
      inst.v2.push_back(v);
      if (deg[v] > 2) throw ValidationError("heavy-hex lattice has a degree-3 parity target");
      if (deg[v] == 2) inst.w.push_back(v);
    }
  }
  inst.edge_color = bipartite_edge_coloring(inst.graph);

  Rng rng = make_stream(seed, {6});
  auto coin = [&rng] { return (rng() >> 63) ? 1.0 : -1.0; };
  IsingPolynomial& poly = inst.polynomial;
  poly.n = inst.graph.n;
  poly.sense = Sense::kMinimize;
  for (int v = 0; v < poly.n; ++v) poly.add_linear(v, coin());
  for (const auto& [a, b] : inst.graph.edges) poly.add_quadratic(a, b, coin());
  for (int l : inst.w) poly.add_cubic(l, adj[l][0], adj[l][1], coin());
  return inst;
}

HeavyHexInstance heavy_hex_preset(const std::string& name, std::uint64_t seed) {
  if (name == "127") return heavy_hex_instance(7, 15, seed);
  if (name == "small") return heavy_hex_instance(2, 7, seed);
  throw ValidationError("unknown heavy-hex preset '" + name + "' (use 127 or small)");
}

void QaoaParams::validate() const {
  if (p < 1) throw ValidationError("QAOA depth p must be >= 1");
  if (static_cast<int>(gammas.size()) != p || static_cast<int>(betas.size()) != p) {
    throw ValidationError("QAOA needs exactly p gammas and p betas");
  }
  for (double v : gammas) check_coefficient(v);
  for (double v : betas) check_coefficient(v);
}

QaoaParams published_angles(int p) {
  if (p == 1) return {1, {2.8405}, {0.3982}};
  if (p == 2) return {2, {1.1506, 0.1941}, {0.3288, 0.6582}};
  throw ValidationError("published angles exist for p = 1 and p = 2 only");
}

LayeredCircuit phase_separator(const IsingPolynomial& poly, double gamma) {
  poly.validate();
  const int n = poly.n;
  LayeredCircuit c(n);
  append_linear(c, poly, gamma);

  std::vector<std::pair<std::pair<int, int>, double>> quads(poly.quadratic.begin(),
                                                           poly.quadratic.end());
  std::vector<std::vector<int>> sets;
  for (const auto& q : quads) sets.push_back({q.first.first, q.first.second});
  for (const auto& round : pack_disjoint(sets)) {
    std::vector<CnotPair> pairs;
    std::vector<double> angles(n, 0.0);
    for (std::size_t i : round) {
      const auto [a, b] = quads[i].first;
      pairs.push_back({a, b});
      angles[b] = 2.0 * gamma * quads[i].second;
    }
    c.add_cnots(pairs);
    c.add_layer(rz_layer(n, angles));
    c.add_cnots(pairs);
  }

  std::vector<std::pair<std::array<int, 3>, double>> cubes(poly.cubic.begin(), poly.cubic.end());
  sets.clear();
  for (const auto& t : cubes) sets.push_back({t.first[0], t.first[1], t.first[2]});
  for (const auto& round : pack_disjoint(sets)) {
    std::vector<CnotPair> first, second;
    std::vector<double> angles(n, 0.0);
    for (std::size_t i : round) {
      const auto& [abc, d] = cubes[i];
      first.push_back({abc[1], abc[0]});
      second.push_back({abc[2], abc[0]});
      angles[abc[0]] = 2.0 * gamma * d;
    }
    c.add_cnots(first);
    c.add_cnots(second);
    c.add_layer(rz_layer(n, angles));
    c.add_cnots(second);
    c.add_cnots(first);
  }
  return c;
}

LayeredCircuit heavy_hex_phase_separator(const HeavyHexInstance& inst, double gamma) {
  const IsingPolynomial& poly = inst.polynomial;
  poly.validate();
  const int n = poly.n;
  if (n != inst.graph.n || inst.edge_color.size() != inst.graph.edges.size()) {
    throw ValidationError("heavy-hex layout does not match the polynomial");
  }
  std::set<int> in_v2(inst.v2.begin(), inst.v2.end());
  std::set<int> in_w(inst.w.begin(), inst.w.end());
  std::set<std::pair<int, int>> edge_set(inst.graph.edges.begin(), inst.graph.edges.end());
  for (const auto& [ij, c] : poly.quadratic) {
    if (!edge_set.count(ij)) {
      throw ValidationError("quadratic term (" + std::to_string(ij.first) + "," +
                            std::to_string(ij.second) + ") is not a lattice edge");
    }
  }

  // Incident (color, neighbor) pairs of each parity target, by color.
  std::vector<std::vector<std::pair<int, int>>> incident(n);
  std::array<std::vector<CnotPair>, 3> layer_pairs;
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    auto [a, b] = inst.graph.edges[e];
    if (in_v2.count(a)) std::swap(a, b);
    if (!in_v2.count(b) || in_v2.count(a)) {
      throw ValidationError("heavy-hex edge does not join the two sides");
    }
    const int color = inst.edge_color[e];
    if (color < 0 || color > 2) throw ValidationError("heavy-hex layout needs 3 edge colors");
    layer_pairs[color].push_back({a, b});
    incident[b].push_back({color, a});
  }
  auto quad = [&](int i, int j) {
    auto it = poly.quadratic.find({std::min(i, j), std::max(i, j)});
    return it == poly.quadratic.end() ? 0.0 : it->second;
  };

  std::array<std::vector<double>, 6> slot;
  for (auto& s : slot) s.assign(n, 0.0);
  std::set<std::array<int, 3>> placed_cubic;
  for (int l : inst.v2) {
    auto inc = incident[l];
    std::sort(inc.begin(), inc.end());
    if (inc.size() == 1) {
      slot[inc[0].first][l] += 2.0 * gamma * quad(l, inc[0].second);
    } else if (inc.size() == 2) {
      const auto [ca, na] = inc[0];
      const auto [cb, nb] = inc[1];
      std::array<int, 3> key{l, na, nb};
      std::sort(key.begin(), key.end());
      auto it = poly.cubic.find(key);
      if (it != poly.cubic.end()) {
        if (!in_w.count(l)) throw ValidationError("cubic term centered off the W set");
        slot[cb][l] += 2.0 * gamma * it->second;
        placed_cubic.insert(key);
      }
      slot[ca][l] += 2.0 * gamma * quad(l, na);
      slot[3 + ca][l] += 2.0 * gamma * quad(l, nb);
    }
  }
  if (placed_cubic.size() != poly.cubic.size()) {
    throw ValidationError("cubic terms must sit on a degree-2 vertex and its two neighbors");
  }

  LayeredCircuit c(n);
  append_linear(c, poly, gamma);
  for (int s = 0; s < 6; ++s) {
    c.add_cnots(layer_pairs[s % 3], "c" + std::to_string(s % 3));
    if (any_nonzero(slot[s])) c.add_layer(rz_layer(n, slot[s]));
  }
  return c;
}

namespace {

LayeredCircuit qaoa_shell(int n, const QaoaParams& params,
                          const std::function<LayeredCircuit(double)>& separator) {
  params.validate();
  LayeredCircuit c(n);
  c.add_uniform({GateKind::kH, 0.0});
  for (int j = 0; j < params.p; ++j) {
    c.append(separator(params.gammas[j]));
    c.add_uniform({GateKind::kRx, 2.0 * params.betas[j]});
  }
  return c;
}

}  // namespace

LayeredCircuit build_qaoa(const IsingPolynomial& poly, const QaoaParams& params) {
  return qaoa_shell(poly.n, params, [&](double g) { return phase_separator(poly, g); });
}

LayeredCircuit build_qaoa_heavy_hex(const HeavyHexInstance& instance, const QaoaParams& params) {
  return qaoa_shell(instance.polynomial.n, params,
                    [&](double g) { return heavy_hex_phase_separator(instance, g); });
}

BruteForceResult brute_force(const IsingPolynomial& poly, int threads, int limit) {
  poly.validate();
  if (poly.n > limit) {
    throw ResourceLimitError("brute force over " + std::to_string(poly.n) +
                             " variables exceeds the limit of " + std::to_string(limit));
  }
  const auto terms = spin_terms(poly);
  std::vector<std::pair<std::uint64_t, double>> masks;
  for (const auto& t : terms) masks.emplace_back(low_word(t.mask), t.coefficient);

  const std::uint64_t dim = std::uint64_t{1} << poly.n;
  const std::uint64_t chunk = std::max<std::uint64_t>(1, std::min<std::uint64_t>(dim, 1 << 16));
  const std::uint64_t chunks = (dim + chunk - 1) / chunk;
  std::vector<BruteForceResult> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t k) {
    BruteForceResult& r = partial[k];
    const std::uint64_t begin = k * chunk, end = std::min(dim, begin + chunk);
    for (std::uint64_t x = begin; x < end; ++x) {
      double v = poly.offset;
      for (const auto& [m, c] : masks) v += (std::popcount(x & m) & 1) ? -c : c;
      if (x == begin || better(poly.sense, v, r.best)) {
        r.best = v;
        r.argbest = x;
      }
      ++r.histogram[v];
    }
  });
  BruteForceResult out = std::move(partial[0]);
  for (std::size_t k = 1; k < partial.size(); ++k) {
    if (better(poly.sense, partial[k].best, out.best)) {
      out.best = partial[k].best;
      out.argbest = partial[k].argbest;
    }
    for (const auto& [v, c] : partial[k].histogram) out.histogram[v] += c;
  }
  return out;
}

std::optional<double> approximation_guarantee(int p) {
  switch (p) {
    case 1: return 0.692;
    case 2: return 0.7559;
    case 3: return 0.7924;
    default: return std::nullopt;
  }
}

double approximation_ratio(double value, double optimum) {
  if (optimum == 0.0) throw ValidationError("approximation ratio needs a nonzero optimum");
  return value / optimum;
}

ApproximationCheck check_approximation(double value, double optimum, int p) {
  ApproximationCheck out;
  out.ratio = approximation_ratio(value, optimum);
  out.guarantee = approximation_guarantee(p);
  out.passes = !out.guarantee || out.ratio >= *out.guarantee;
  return out;
}

namespace {

double p1_expectation(int n, const std::vector<double>& phase, const std::vector<double>& value,
                      double gamma, double beta) {
  const std::size_t dim = phase.size();
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<Complex> amps(dim);
  for (std::size_t x = 0; x < dim; ++x) amps[x] = std::polar(amp, -gamma * phase[x]);
  Statevector psi(n, std::move(amps));
  const Matrix2 rx = gate_matrix({GateKind::kRx, 2.0 * beta});
  for (int q = 0; q < n; ++q) psi.apply_1q(q, rx);
  double e = 0.0;
  for (std::size_t x = 0; x < dim; ++x) e += std::norm(psi[x]) * value[x];
  return e;
}

}  // namespace

double qaoa_p1_expectation(const IsingPolynomial& poly, double gamma, double beta) {
  return p1_expectation(poly.n, poly.phase_diagonal(), poly.diagonal(), gamma, beta);
}

GridResult grid_search_p1(const IsingPolynomial& poly, int steps, int threads) {
  if (steps < 1) throw ValidationError("grid search needs at least one step");
  const auto phase = poly.phase_diagonal();
  const auto value = poly.diagonal();
  std::vector<GridResult> rows(steps);
  parallel_for(steps, threads, [&](std::size_t i) {
    const double gamma = 2.0 * std::numbers::pi * static_cast<double>(i) / steps;
    for (int j = 0; j < steps; ++j) {
      const double beta = 0.5 * std::numbers::pi * j / steps;
      const double e = p1_expectation(poly.n, phase, value, gamma, beta);
      if (j == 0 || better(poly.sense, e, rows[i].expectation)) rows[i] = {gamma, beta, e};
    }
  });
  GridResult best = rows[0];
  for (const auto& r : rows) {
    if (better(poly.sense, r.expectation, best.expectation)) best = r;
  }
  return best;
}

}  // namespace cvarbound
