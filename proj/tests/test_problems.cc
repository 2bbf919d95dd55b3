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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "cvarbound/errors.hpp"
#include "cvarbound/problems.hpp"
#include "cvarbound/simulator.hpp"
#include "testing/dense_oracle.hpp"

namespace cvarbound {
namespace {

// Independent evaluator: spins z = 1 - 2 x, term by term.
double spin_eval(const IsingPolynomial& p, Bitstring x) {
  auto z = [x](int i) { return ((x >> i) & 1) ? -1.0 : 1.0; };
  double v = p.offset;
  for (const auto& [i, c] : p.linear) v += c * z(i);
  for (const auto& [ij, c] : p.quadratic) v += c * z(ij.first) * z(ij.second);
  for (const auto& [t, c] : p.cubic) v += c * z(t[0]) * z(t[1]) * z(t[2]);
  return v;
}

int cut_size(const Graph& g, Bitstring x) {
  int cut = 0;
  for (const auto& [i, j] : g.edges) cut += ((x >> i) & 1) != ((x >> j) & 1);
  return cut;
}

IsingPolynomial random_poly(int n, Rng& rng, bool cubic = true) {
  IsingPolynomial p;
  p.n = n;
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  std::uniform_int_distribution<int> v(0, n - 1);
  for (int i = 0; i < n; ++i) p.add_linear(i, c(rng));
  for (int k = 0; k < 2 * n; ++k) {
    const int a = v(rng), b = v(rng);
    if (a != b) p.add_quadratic(a, b, c(rng));
  }
  if (cubic) {
    for (int k = 0; k < n; ++k) {
      const int a = v(rng), b = v(rng), d = v(rng);
      if (a != b && b != d && a != d) p.add_cubic(a, b, d, c(rng));
    }
  }
  return p;
}

TEST(IsingPolynomial, EvaluateExamples) {
  IsingPolynomial lin;
  lin.n = 4;
  for (int i = 0; i < 4; ++i) lin.add_linear(i, 1.0);
  EXPECT_DOUBLE_EQ(lin.evaluate(0), 4.0);

  IsingPolynomial quad;
  quad.n = 2;
  quad.add_quadratic(0, 1, 1.0);
  EXPECT_DOUBLE_EQ(quad.evaluate(parse_bitstring("01")), -1.0);
}

TEST(IsingPolynomial, EvaluateMatchesIndependentEvaluator) {
  Rng rng = make_stream(41, {});
  const IsingPolynomial p = random_poly(10, rng);
  std::uniform_int_distribution<Bitstring> x(0, 1023);
  for (int i = 0; i < 100; ++i) {
    const Bitstring b = x(rng);
    EXPECT_NEAR(p.evaluate(b), spin_eval(p, b), 1e-12);
  }
}

TEST(IsingPolynomial, DiagonalMatchesPauliTermHamiltonian) {
  Rng rng = make_stream(42, {});
  for (int trial = 0; trial < 10; ++trial) {
    const IsingPolynomial p = random_poly(2 + trial % 7, rng);
    const auto diag = p.diagonal();
    const auto phase = p.phase_diagonal();
    const Eigen::Index dim = Eigen::Index{1} << p.n;
    oracle::Mat h = oracle::Mat::Zero(dim, dim);
    for (const auto& t : p.to_pauli_terms()) {
      h += t.weight * t.pauli.sign() * oracle::pauli_dense(t.pauli.label());
    }
    for (Eigen::Index x = 0; x < dim; ++x) {
      EXPECT_NEAR(diag[x], p.evaluate(x), 1e-12);
      EXPECT_NEAR(phase[x] + p.offset, diag[x], 1e-12);
      EXPECT_NEAR(h(x, x).real() + p.offset, diag[x], 1e-12);
    }
  }
}

TEST(IsingPolynomial, ValidationNamesProblems) {
  IsingPolynomial p;
  p.n = 3;
  EXPECT_THROW(p.add_linear(3, 1.0), ValidationError);
  EXPECT_THROW(p.add_quadratic(1, 1, 1.0), ValidationError);
  EXPECT_THROW(p.add_cubic(0, 1, 1, 1.0), ValidationError);
  EXPECT_THROW(p.add_linear(0, std::nan("")), ValidationError);
}

TEST(Maxcut, K4) {
  const MaxcutInstance k4 = maxcut_3regular(4, 1);
  EXPECT_EQ(k4.graph.edges.size(), 6u);
  EXPECT_EQ(k4.polynomial.sense, Sense::kMaximize);
  int best = 0;
  for (Bitstring x = 0; x < 16; ++x) {
    EXPECT_NEAR(k4.polynomial.evaluate(x), cut_size(k4.graph, x), 1e-12);
    best = std::max(best, cut_size(k4.graph, x));
  }
  EXPECT_EQ(best, 4);
  EXPECT_DOUBLE_EQ(brute_force(k4.polynomial).best, 4.0);
}

TEST(Maxcut, RegularSimpleAndReproducible) {
  for (int nodes : {6, 8, 12, 20, 40}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const MaxcutInstance m = maxcut_3regular(nodes, seed);
      for (int d : m.graph.degrees()) EXPECT_EQ(d, 3);
      std::set<std::pair<int, int>> unique(m.graph.edges.begin(), m.graph.edges.end());
      EXPECT_EQ(unique.size(), m.graph.edges.size());
      for (const auto& [i, j] : m.graph.edges) EXPECT_LT(i, j);
    }
  }
  const auto a = brute_force(maxcut_3regular(12, 7).polynomial);
  const auto b = brute_force(maxcut_3regular(12, 7).polynomial, 3);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.argbest, b.argbest);
  EXPECT_EQ(a.histogram, b.histogram);
  EXPECT_THROW(maxcut_3regular(5, 1), ValidationError);
  EXPECT_THROW(maxcut_3regular(2, 1), ValidationError);
}

TEST(BruteForce, HistogramAndLimits) {
  IsingPolynomial p;
  p.n = 1;
  p.add_linear(0, -1.0);
  const auto r = brute_force(p);
  EXPECT_DOUBLE_EQ(r.best, -1.0);
  EXPECT_EQ(r.argbest, 0u);
  std::uint64_t total = 0;
  for (const auto& [v, c] : brute_force(maxcut_3regular(10, 3).polynomial).histogram) total += c;
  EXPECT_EQ(total, 1024u);

  const HeavyHexInstance big = heavy_hex_preset("127", 1);
  EXPECT_THROW(brute_force(big.polynomial), ResourceLimitError);
}

TEST(HeavyHex, Preset127Structure) {
  const HeavyHexInstance hh = heavy_hex_preset("127", 3);
  EXPECT_EQ(hh.graph.n, 127);
  EXPECT_EQ(hh.graph.edges.size(), 144u);
  EXPECT_EQ(hh.polynomial.quadratic.size(), 144u);
  EXPECT_EQ(hh.polynomial.linear.size(), 127u);
  EXPECT_EQ(hh.polynomial.cubic.size(), hh.w.size());
  for (const auto& [k, c] : hh.polynomial.linear) EXPECT_EQ(std::abs(c), 1.0);
}

void check_instance(const HeavyHexInstance& hh) {
  const auto deg = hh.graph.degrees();
  const auto adj = hh.graph.adjacency();
  std::vector<int> side(hh.graph.n, -1);
  for (int v : hh.v2) side[v] = 2;
  for (int v : hh.v3) side[v] = 3;
  for (int v = 0; v < hh.graph.n; ++v) {
    EXPECT_NE(side[v], -1);
    EXPECT_LE(deg[v], 3);
  }
  for (const auto& [i, j] : hh.graph.edges) EXPECT_NE(side[i], side[j]);
  for (int v : hh.v2) EXPECT_LE(deg[v], 2);
  // W is exactly the degree-2 vertices of V2, each with one cubic term on its neighbors.
  std::set<int> w(hh.w.begin(), hh.w.end());
  int count = 0;
  for (int v : hh.v2) count += deg[v] == 2;
  EXPECT_EQ(static_cast<int>(w.size()), count);
  for (int l : hh.w) {
    ASSERT_EQ(adj[l].size(), 2u);
    std::array<int, 3> t{l, adj[l][0], adj[l][1]};
    std::sort(t.begin(), t.end());
    EXPECT_TRUE(hh.polynomial.cubic.count(t));
  }
  // Proper 3-edge-coloring.
  ASSERT_EQ(hh.edge_color.size(), hh.graph.edges.size());
  std::vector<std::set<int>> seen(hh.graph.n);
  for (std::size_t e = 0; e < hh.graph.edges.size(); ++e) {
    const int c = hh.edge_color[e];
    EXPECT_GE(c, 0);
    EXPECT_LT(c, 3);
    EXPECT_TRUE(seen[hh.graph.edges[e].first].insert(c).second);
    EXPECT_TRUE(seen[hh.graph.edges[e].second].insert(c).second);
  }
}

TEST(HeavyHex, InstancesAreValid) {
  check_instance(heavy_hex_preset("127", 5));
  check_instance(heavy_hex_preset("small", 5));
  check_instance(heavy_hex_instance(3, 11, 2));
  check_instance(heavy_hex_instance(4, 7, 9));
  EXPECT_THROW(heavy_hex_instance(2, 8, 1), ValidationError);
  EXPECT_THROW(heavy_hex_preset("huge", 1), ValidationError);
}

TEST(HeavyHex, EdgeColoringOnRandomBipartiteGraphs) {
  Rng rng = make_stream(43, {});
  for (int trial = 0; trial < 50; ++trial) {
    // Random bipartite graph with max degree 3.
    Graph g;
    g.n = 16;
    std::vector<int> deg(16, 0);
    std::uniform_int_distribution<int> left(0, 7), right(8, 15);
    std::set<std::pair<int, int>> edges;
    for (int k = 0; k < 30; ++k) {
      const int a = left(rng), b = right(rng);
      if (deg[a] < 3 && deg[b] < 3 && edges.insert({a, b}).second) {
        ++deg[a];
        ++deg[b];
      }
    }
    g.edges.assign(edges.begin(), edges.end());
    const auto colors = bipartite_edge_coloring(g);
    std::vector<std::set<int>> seen(16);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      EXPECT_LT(colors[e], 3);
      EXPECT_TRUE(seen[g.edges[e].first].insert(colors[e]).second);
      EXPECT_TRUE(seen[g.edges[e].second].insert(colors[e]).second);
    }
  }
}

// exp(-i gamma phase(x)) applied to the uniform superposition, compared
// with the separator circuit up to a global phase.
double separator_phase_error(const LayeredCircuit& separator, const std::vector<double>& phase,
                             double gamma) {
  const int n = separator.num_qubits();
  LayeredCircuit c(n);
  c.add_uniform({GateKind::kH});
  c.append(separator);
  const Statevector psi = statevector(c);
  const std::complex<double> ref = psi[0] / std::exp(std::complex<double>(0, -gamma * phase[0]));
  double err = 0.0;
  for (std::size_t x = 0; x < psi.dimension(); ++x) {
    const std::complex<double> expect = ref * std::exp(std::complex<double>(0, -gamma * phase[x]));
    err = std::max(err, std::abs(psi[x] - expect) * std::sqrt(double(psi.dimension())));
  }
  return err;
}

TEST(PhaseSeparator, GenericMatchesDiagonalExponential) {
  Rng rng = make_stream(44, {});
  for (int trial = 0; trial < 10; ++trial) {
    const IsingPolynomial p = random_poly(3 + trial % 6, rng);
    const double gamma = 0.3 + 0.2 * trial;
    const LayeredCircuit sep = phase_separator(p, gamma);
    // Dense check of the full unitary for small n.
    const oracle::Mat u = oracle::unitary(sep);
    const auto phase = p.phase_diagonal();
    oracle::Mat d = oracle::Mat::Zero(u.rows(), u.cols());
    for (Eigen::Index x = 0; x < u.rows(); ++x) d(x, x) = std::exp(oracle::Cx(0, -gamma * phase[x]));
    EXPECT_LT(oracle::phase_distance(u, d), 1e-9);
  }
}

TEST(PhaseSeparator, HeavyHexSmallPatchMatchesDiagonalExponential) {
  const HeavyHexInstance hh = heavy_hex_preset("small", 11);
  for (double gamma : {0.37, 1.2, 2.9}) {
    EXPECT_LT(separator_phase_error(heavy_hex_phase_separator(hh, gamma),
                                    hh.polynomial.phase_diagonal(), gamma),
              1e-9);
  }
}

TEST(PhaseSeparator, HeavyHexLayersAreDisjointAndThreeClasses) {
  const HeavyHexInstance hh = heavy_hex_preset("127", 2);
  const LayeredCircuit sep = heavy_hex_phase_separator(hh, 0.5);
  const CircuitStats s = stats(sep);
  EXPECT_EQ(s.cnot_depth, 6);
  EXPECT_EQ(s.cnot_count, 288);
  EXPECT_EQ(s.per_class.size(), 3u);
}

TEST(BuildQaoa, HeavyHexDepthAndCount) {
  const HeavyHexInstance hh = heavy_hex_preset("127", 2);
  for (int p = 1; p <= 5; ++p) {
    QaoaParams params{p, std::vector<double>(p, 0.3), std::vector<double>(p, 0.2)};
    const CircuitStats s = stats(build_qaoa_heavy_hex(hh, params));
    EXPECT_EQ(s.cnot_depth, 6 * p);
    EXPECT_EQ(s.cnot_count, 288 * p);
  }
  const HeavyHexInstance small = heavy_hex_preset("small", 2);
  EXPECT_EQ(stats(build_qaoa_heavy_hex(small, {2, {0.1, 0.2}, {0.3, 0.4}})).cnot_depth, 12);
}

TEST(BuildQaoa, ZeroAnglesGiveUniformDistribution) {
  IsingPolynomial p;
  p.n = 2;
  p.add_quadratic(0, 1, 1.0);
  const Distribution d = ideal_distribution(build_qaoa(p, {1, {0.0}, {0.0}}));
  for (double v : d.probabilities) EXPECT_NEAR(v, 0.25, 1e-12);
}

TEST(BuildQaoa, HeavyHexLayoutAgreesWithGenericLayout) {
  const HeavyHexInstance hh = heavy_hex_preset("small", 4);
  const QaoaParams params{2, {0.4, 0.9}, {0.7, 0.2}};
  const Distribution a = ideal_distribution(build_qaoa_heavy_hex(hh, params));
  const Distribution b = ideal_distribution(build_qaoa(hh.polynomial, params));
  EXPECT_LT(total_variation(a, b), 1e-10);
}

TEST(BuildQaoa, FastP1ExpectationMatchesStatevector) {
  const IsingPolynomial p = maxcut_3regular(8, 2).polynomial;
  for (auto [g, b] : {std::pair{0.3, 0.2}, std::pair{2.8405, 0.3982}, std::pair{5.0, 1.1}}) {
    const Distribution d = ideal_distribution(build_qaoa(p, {1, {g}, {b}}));
    double mean = 0.0;
    for (std::size_t x = 0; x < d.probabilities.size(); ++x) mean += d.probabilities[x] * p.evaluate(x);
    EXPECT_NEAR(qaoa_p1_expectation(p, g, b), mean, 1e-10);
  }
}

TEST(BuildQaoa, ParamValidation) {
  IsingPolynomial p;
  p.n = 2;
  EXPECT_THROW(build_qaoa(p, {2, {0.1}, {0.1, 0.2}}), ValidationError);
  EXPECT_THROW(build_qaoa(p, {0, {}, {}}), ValidationError);
}

TEST(Qaoa, GridOptimizedP1MeetsGuarantee) {
  for (int nodes : {8, 12, 14}) {
    const IsingPolynomial p = maxcut_3regular(nodes, 100 + nodes).polynomial;
    const GridResult g = grid_search_p1(p, 64, 2);
    const Distribution d = ideal_distribution(build_qaoa(p, {1, {g.gamma}, {g.beta}}));
    double mean = 0.0;
    for (std::size_t x = 0; x < d.probabilities.size(); ++x) mean += d.probabilities[x] * p.evaluate(x);
    EXPECT_NEAR(mean, g.expectation, 1e-9);
    EXPECT_GE(mean, 0.692 * brute_force(p).best) << nodes;
  }
}

TEST(Approximation, RatiosAndGuarantees) {
  EXPECT_NEAR(approximation_ratio(47, 56), 0.839, 5e-4);
  EXPECT_NEAR(approximation_ratio(43.1, 56), 0.770, 5e-4);
  EXPECT_DOUBLE_EQ(approximation_ratio(56, 56), 1.0);
  EXPECT_THROW(approximation_ratio(1, 0), ValidationError);
  EXPECT_DOUBLE_EQ(*approximation_guarantee(1), 0.692);
  EXPECT_DOUBLE_EQ(*approximation_guarantee(2), 0.7559);
  EXPECT_DOUBLE_EQ(*approximation_guarantee(3), 0.7924);
  EXPECT_FALSE(approximation_guarantee(4).has_value());
  EXPECT_TRUE(check_approximation(40, 56, 1).passes);
  EXPECT_FALSE(check_approximation(38, 56, 1).passes);
}

TEST(PublishedAngles, Constants) {
  const QaoaParams p1 = published_angles(1);
  EXPECT_DOUBLE_EQ(p1.gammas[0], 2.8405);
  EXPECT_DOUBLE_EQ(p1.betas[0], 0.3982);
  const QaoaParams p2 = published_angles(2);
  EXPECT_EQ(p2.gammas, (std::vector<double>{1.1506, 0.1941}));
  EXPECT_EQ(p2.betas, (std::vector<double>{0.3288, 0.6582}));
  EXPECT_THROW(published_angles(3), ValidationError);
  EXPECT_DOUBLE_EQ(kHeavyHexReferenceOptimum, -188.0);
}

}  // namespace
}  // namespace cvarbound
