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

#include "cvarbound/circuit.hpp"
#include "cvarbound/errors.hpp"
#include "cvarbound/simulator.hpp"
#include "testing/dense_oracle.hpp"
#include "testing/random_circuits.hpp"

namespace cvarbound {
namespace {

LayeredCircuit bell() {
  LayeredCircuit c(2);
  c.add_gate(0, {GateKind::kH});
  c.add_cnots({{0, 1}});
  return c;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(Bitstrings, LabelsAreQubitZeroRightmost) {
  EXPECT_EQ(bitstring_label(1, 3), "001");
  EXPECT_EQ(parse_bitstring("100"), 4u);
  EXPECT_THROW(parse_bitstring("10a"), ValidationError);
}

TEST(Statevector, Examples) {
  const Statevector empty = statevector(LayeredCircuit(3));
  EXPECT_DOUBLE_EQ(std::abs(empty[0]), 1.0);

  LayeredCircuit h(1);
  h.add_gate(0, {GateKind::kH});
  const Statevector plus = statevector(h);
  EXPECT_NEAR(plus[0].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(plus[1].real(), 1 / std::sqrt(2.0), 1e-15);

  const Distribution b = ideal_distribution(bell());
  EXPECT_NEAR(b.at(0), 0.5, 1e-15);
  EXPECT_NEAR(b.at(3), 0.5, 1e-15);
  EXPECT_NEAR(b.at(1) + b.at(2), 0.0, 1e-15);

  LayeredCircuit x(1);
  x.add_gate(0, {GateKind::kX});
  EXPECT_NEAR(ideal_distribution(x).at(1), 1.0, 1e-15);
  EXPECT_THROW(statevector(LayeredCircuit(5), 4), ResourceLimitError);
}

TEST(Statevector, MatchesDenseOracle) {
  Rng rng = make_stream(31, {});
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 6;
    const LayeredCircuit c = testing_util::random_circuit(n, 4, 0, 0.0, rng);
    const Statevector psi = statevector(c);
    EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-10);
    EXPECT_LT(max_diff(ideal_distribution(c).probabilities, oracle::ideal_probs(c)), 1e-12);
  }
}

TEST(NoisyExact, NoiselessEqualsIdeal) {
  Rng rng = make_stream(32, {});
  const LayeredCircuit c = testing_util::random_circuit(4, 3, 0, 0.0, rng);
  EXPECT_LT(max_diff(noisy_distribution_exact(c).probabilities, ideal_distribution(c).probabilities),
            1e-12);
}

TEST(NoisyExact, MatchesDenseOracle) {
  Rng rng = make_stream(33, {});
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 5;
    const LayeredCircuit c = testing_util::random_circuit(n, 4, 4, 0.3, rng);
    EXPECT_LT(max_diff(noisy_distribution_exact(c).probabilities, oracle::diag(oracle::noisy_state(c))),
              1e-12);
  }
}

TEST(NoisyExact, OneQubitZNoiseAfterHadamard) {
  // H, then a noisy (empty) layer with Z noise, then H: p(1) = (1 - exp(-2 lambda)) / 2.
  const double lambda = 0.4;
  LayeredCircuit c(1);
  c.add_gate(0, {GateKind::kH});
  CnotLayer l;
  l.noise = PauliLindbladModel(1, {{PauliString::from_label("Z"), lambda}});
  c.add_layer(l);
  c.add_gate(0, {GateKind::kH});
  const Distribution d = noisy_distribution_exact(c);
  EXPECT_NEAR(d.at(1), (1 - std::exp(-2 * lambda)) / 2, 1e-12);
}

TEST(NoisyExact, ExactLowerBoundAndErrorBranch) {
  Rng rng = make_stream(34, {});
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const LayeredCircuit c = testing_util::random_circuit(n, 5, 5, 0.2, rng);
    const auto noisy = noisy_distribution_exact(c).probabilities;
    const auto ideal = ideal_distribution(c).probabilities;
    double w = 1.0;
    for (const auto& layer : c.layers()) {
      if (const auto* cl = std::get_if<CnotLayer>(&layer); cl && cl->noise) {
        w *= no_error_probability(*cl->noise);
      }
    }
    const double inv_sqrt_gamma = 1.0 / std::sqrt(total_gamma(c));
    double rest = 0.0;
    for (std::size_t x = 0; x < noisy.size(); ++x) {
      EXPECT_GE(noisy[x] - ideal[x] * inv_sqrt_gamma, -1e-12);
      EXPECT_GE(noisy[x] - w * ideal[x], -1e-12);
      rest += noisy[x] - w * ideal[x];
    }
    EXPECT_NEAR(rest, 1.0 - w, 1e-12);
  }
}

TEST(SampleNoisy, NoiselessBellFrequencies) {
  const SampleSet s = sample_noisy(bell(), 100000, 5);
  EXPECT_EQ(s.shots, 100000u);
  EXPECT_EQ(s.counts.size(), 2u);
  const double f = s.counts.at(0) / 1e5;
  EXPECT_NEAR(f, 0.5, 4 * std::sqrt(0.25 / 1e5));
}

TEST(SampleNoisy, ConvergesToExactChannel) {
  Rng rng = make_stream(35, {});
  const LayeredCircuit c = testing_util::random_circuit(4, 4, 4, 0.3, rng, 4);
  const SampleSet s = sample_noisy(c, 1000000, 17);
  std::uint64_t total = 0;
  for (const auto& [x, k] : s.counts) total += k;
  EXPECT_EQ(total, s.shots);
  EXPECT_LT(total_variation(empirical_distribution(s), noisy_distribution_exact(c)), 5e-3);
}

TEST(SampleNoisy, DeterministicAcrossRunsAndThreads) {
  Rng rng = make_stream(36, {});
  const LayeredCircuit c = testing_util::random_circuit(5, 4, 4, 0.2, rng);
  SimOptions one, four;
  four.threads = 4;
  const SampleSet a = sample_noisy(c, 50000, 99, one);
  const SampleSet b = sample_noisy(c, 50000, 99, one);
  const SampleSet d = sample_noisy(c, 50000, 99, four);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.counts, d.counts);
  const SampleSet e = sample_noisy(c, 50000, 100, one);
  EXPECT_NE(a.counts, e.counts);
}

TEST(SampleDistribution, DeterministicAndFaithful) {
  Distribution d{2, {0.1, 0.2, 0.3, 0.4}};
  const SampleSet a = sample_distribution(d, 200000, 3);
  EXPECT_EQ(a.counts, sample_distribution(d, 200000, 3).counts);
  EXPECT_LT(total_variation(empirical_distribution(a), d), 5e-3);
}

TEST(FidelityBound, IdenticalNoiselessCircuitsGiveOne) {
  Rng rng = make_stream(37, {});
  const LayeredCircuit u = testing_util::random_circuit(3, 3, 0, 0.0, rng);
  const FidelityBound b = fidelity_upper_bound(u, u, 1000, 0.5, 1);
  EXPECT_DOUBLE_EQ(b.bound, 1.0);
  EXPECT_DOUBLE_EQ(b.zero_fraction, 1.0);
}

TEST(FidelityBound, NoisyIdenticalCircuitsSaturate) {
  Rng rng = make_stream(38, {});
  const LayeredCircuit u = testing_util::random_circuit(3, 3, 3, 0.2, rng);
  LayeredCircuit combined = u;
  combined.append(u.inverse());
  const double alpha = 1.0 / std::sqrt(total_gamma(combined));
  const FidelityBound b = fidelity_upper_bound(u, u, 100000, alpha, 2);
  EXPECT_GE(b.bound, 1.0 - 4 * b.stderr_proxy - 1e-3);
}

TEST(FidelityBound, BoundsNoiseFreeFidelity) {
  Rng rng = make_stream(39, {});
  const LayeredCircuit u = testing_util::random_circuit(3, 2, 2, 0.15, rng);
  const LayeredCircuit v = testing_util::random_circuit(3, 2, 2, 0.15, rng);
  const Statevector pu = statevector(u), pv = statevector(v);
  std::complex<double> overlap = 0.0;
  for (std::size_t i = 0; i < pu.dimension(); ++i) overlap += std::conj(pv[i]) * pu[i];
  const double fidelity = std::norm(overlap);
  LayeredCircuit combined = u;
  combined.append(v.inverse());
  const double alpha = 1.0 / std::sqrt(total_gamma(combined));
  int holds = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    holds += fidelity <= fidelity_upper_bound(u, v, 100000, alpha, seed).bound;
  }
  EXPECT_GE(holds, 95);
}

TEST(FidelityBound, RejectsMismatch) {
  EXPECT_THROW(fidelity_upper_bound(LayeredCircuit(2), LayeredCircuit(3), 10, 0.5, 1), ValidationError);
  EXPECT_THROW(fidelity_upper_bound(LayeredCircuit(2), LayeredCircuit(2), 10, 0.01, 1), ValidationError);
}

TEST(TwirlCompare, PauliNoiseAgreesWithAndWithoutTwirls) {
  Rng rng = make_stream(40, {});
  const LayeredCircuit c = testing_util::random_circuit(4, 3, 3, 0.2, rng);
  const auto h = [](Bitstring x) { return double(std::popcount(x)); };
  const TwirlComparison r = twirl_compare(c, h, 400000, 200, 5);
  EXPECT_EQ(r.twirls, 200);
  EXPECT_LT(r.tv_values, 0.01);
  EXPECT_LT(r.tv_bitstrings, 0.02);
  ASSERT_TRUE(r.tv_twirled_exact.has_value());
  EXPECT_LT(*r.tv_twirled_exact, 0.01);
  EXPECT_LT(*r.tv_untwirled_exact, 0.01);
}

}  // namespace
}  // namespace cvarbound
