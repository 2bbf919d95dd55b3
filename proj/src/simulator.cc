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

#include "cvarbound/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <variant>

#include "cvarbound/cvar.hpp"
#include "cvarbound/errors.hpp"
#include "cvarbound/trajectory.hpp"

namespace cvarbound {

namespace {

void check_statevector_limit(int n, int limit) {
  if (n > limit) {
    throw ResourceLimitError("statevector simulation of " + std::to_string(n) +
                             " qubits exceeds the limit of " + std::to_string(limit));
  }
}

void check_dense_limit(int n, int limit) {
  if (n > limit) {
    throw ResourceLimitError("dense channel simulation of " + std::to_string(n) +
                             " qubits exceeds the limit of " + std::to_string(limit));
  }
}

// Draws `count` indices from the unnormalized cumulative weights `cdf`.
std::vector<std::pair<Bitstring, std::uint64_t>> draw_outcomes(const std::vector<double>& cdf,
                                                               std::uint64_t count, Rng& rng) {
  const double total = cdf.back();
  auto draw_one = [&] {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<Bitstring>(it - cdf.begin());
  };
  std::vector<std::pair<Bitstring, std::uint64_t>> out;
  if (count >= cdf.size() / 16) {
    std::vector<std::uint64_t> tally(cdf.size(), 0);
    for (std::uint64_t s = 0; s < count; ++s) ++tally[draw_one()];
    for (std::size_t x = 0; x < tally.size(); ++x) {
      if (tally[x]) out.emplace_back(x, tally[x]);
    }
  } else {
    std::vector<Bitstring> draws(count);
    for (auto& d : draws) d = draw_one();
    std::sort(draws.begin(), draws.end());
    for (std::size_t i = 0; i < draws.size();) {
      std::size_t j = i;
      while (j < draws.size() && draws[j] == draws[i]) ++j;
      out.emplace_back(draws[i], j - i);
      i = j;
    }
  }
  return out;
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  return cdf;
}

}  // namespace

std::string bitstring_label(Bitstring x, int n) {
  std::string s(n, '0');
  for (int q = 0; q < n; ++q) {
    if ((x >> q) & 1) s[n - 1 - q] = '1';
  }
  return s;
}

Bitstring parse_bitstring(const std::string& label) {
  if (label.empty() || label.size() > 62) {
    throw ValidationError("bitstring '" + label + "' must have 1 to 62 characters");
  }
  Bitstring x = 0;
  for (char c : label) {
    if (c != '0' && c != '1') throw ValidationError("bitstring '" + label + "' is not binary");
    x = (x << 1) | static_cast<Bitstring>(c == '1');
  }
  return x;
}

void SampleSet::add(Bitstring x, std::uint64_t count) {
  if (count == 0) return;
  counts[x] += count;
  shots += count;
}

void apply_layer(Statevector& psi, const Layer& layer) {
  if (const auto* one = std::get_if<SingleQubitLayer>(&layer)) {
    for (int q = 0; q < psi.num_qubits(); ++q) {
      if (one->gates[q].kind != GateKind::kI) psi.apply_1q(q, gate_matrix(one->gates[q]));
    }
  } else {
    for (const auto& pair : std::get<CnotLayer>(layer).pairs) {
      psi.apply_cnot(pair.control, pair.target);
    }
  }
}

void apply_layer(DensityMatrix& rho, const Layer& layer, int dense_limit) {
  if (const auto* one = std::get_if<SingleQubitLayer>(&layer)) {
    for (int q = 0; q < rho.num_qubits(); ++q) {
      if (one->gates[q].kind != GateKind::kI) rho.apply_1q(q, gate_matrix(one->gates[q]));
    }
    return;
  }
  const auto& c = std::get<CnotLayer>(layer);
  if (c.noise) rho = apply_channel_dense(*c.noise, std::move(rho), dense_limit);
  for (const auto& pair : c.pairs) rho.apply_cnot(pair.control, pair.target);
}

Statevector statevector(const LayeredCircuit& circuit, int limit) {
  check_statevector_limit(circuit.num_qubits(), limit);
  Statevector psi(circuit.num_qubits());
  for (const auto& layer : circuit.layers()) apply_layer(psi, layer);
  return psi;
}

Distribution ideal_distribution(const LayeredCircuit& circuit, int limit) {
  return {circuit.num_qubits(), statevector(circuit, limit).probabilities()};
}

Distribution noisy_distribution_exact(const LayeredCircuit& circuit, int dense_limit) {
  check_dense_limit(circuit.num_qubits(), dense_limit);
  DensityMatrix rho(circuit.num_qubits());
  for (const auto& layer : circuit.layers()) apply_layer(rho, layer, dense_limit);
  Distribution d{circuit.num_qubits(), rho.diagonal()};
  for (auto& p : d.probabilities) p = std::max(p, 0.0);
  return d;
}

Distribution empirical_distribution(const SampleSet& samples) {
  if (samples.shots == 0) throw ValidationError("empirical_distribution: empty sample set");
  check_statevector_limit(samples.n, kDefaultStatevectorLimit);
  Distribution d{samples.n, std::vector<double>(std::size_t{1} << samples.n, 0.0)};
  for (const auto& [x, c] : samples.counts) {
    d.probabilities[x] = static_cast<double>(c) / static_cast<double>(samples.shots);
  }
  return d;
}

double total_variation(const Distribution& a, const Distribution& b) {
  if (a.n != b.n || a.probabilities.size() != b.probabilities.size()) {
    throw ValidationError("total_variation: distributions differ in size");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.probabilities.size(); ++i) {
    s += std::abs(a.probabilities[i] - b.probabilities[i]);
  }
  return 0.5 * s;
}

SampleSet sample_distribution(const Distribution& dist, std::uint64_t shots, std::uint64_t seed,
                              const std::string& provenance) {
  const std::vector<double> cdf = cumulative(dist.probabilities);
  if (!(cdf.back() > 0.0)) throw ValidationError("sample_distribution: zero total probability");
  SampleSet out{dist.n, {}, 0, seed, provenance};
  const std::uint64_t batches = (shots + detail::kShotBatch - 1) / detail::kShotBatch;
  for (std::uint64_t b = 0; b < batches; ++b) {
    Rng rng = make_stream(seed, {2, b});
    const std::uint64_t count = std::min(detail::kShotBatch, shots - b * detail::kShotBatch);
    for (const auto& [x, c] : draw_outcomes(cdf, count, rng)) out.add(x, c);
  }
  return out;
}

namespace detail {

std::vector<NoisyLayerTerms> noisy_layers(const LayeredCircuit& circuit) {
  std::vector<NoisyLayerTerms> out;
  const auto& layers = circuit.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto* c = std::get_if<CnotLayer>(&layers[i]);
    if (!c || !c->noise || c->noise->empty()) continue;
    NoisyLayerTerms t;
    t.layer = i;
    for (const auto& term : c->noise->terms()) {
      t.x.push_back(low_word(term.pauli.x()));
      t.z.push_back(low_word(term.pauli.z()));
      t.fire.push_back(1.0 - no_flip_weight(term.lambda));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<PatternOutcomes> sample_patterns(const LayeredCircuit& circuit, std::uint64_t shots,
                                             std::uint64_t seed, std::uint64_t tag,
                                             const PatternDraw& draw, const SimOptions& options) {
  const int n = circuit.num_qubits();
  check_statevector_limit(n, options.statevector_limit);

  const std::uint64_t batches = (shots + kShotBatch - 1) / kShotBatch;
  std::vector<std::map<PatternKey, std::uint64_t>> per_batch(batches);
  parallel_for(batches, options.threads, [&](std::size_t b) {
    Rng rng = make_stream(seed, {tag, 0, b});
    const std::uint64_t count = std::min(kShotBatch, shots - b * kShotBatch);
    PatternKey key;
    for (std::uint64_t s = 0; s < count; ++s) {
      key.clear();
      draw(rng, key);
      ++per_batch[b][key];
    }
  });
  std::map<PatternKey, std::uint64_t> merged;
  for (auto& m : per_batch) {
    for (auto& [k, c] : m) merged[k] += c;
    m.clear();
  }

  std::vector<PatternOutcomes> out;
  out.reserve(merged.size());
  for (auto& [k, c] : merged) out.push_back({k, c, {}});
  merged.clear();

  // Keys arrive sorted, so neighbours share leading error triples. Each chunk keeps the
  // state after every shared triple (up to kMaxCheckpoints deep) and resumes from there.
  const auto& layers = circuit.layers();
  constexpr std::size_t kMaxCheckpoints = 6;
  const std::size_t chunk = std::max<std::size_t>(64, out.size() / (4 * std::max(1, options.threads)) + 1);
  const std::size_t chunks = (out.size() + chunk - 1) / chunk;
  parallel_for(chunks, options.threads, [&](std::size_t ci) {
    // saved[j]: state after triples 0..j-1 and the layers through triple j-1's layer.
    std::vector<Statevector> saved;
    std::vector<std::size_t> saved_layer;
    const PatternKey* prev = nullptr;
    const std::size_t end = std::min(out.size(), (ci + 1) * chunk);
    for (std::size_t rank = ci * chunk; rank < end; ++rank) {
      PatternOutcomes& po = out[rank];
      const std::size_t triples = (po.key.size() - 1) / 3;
      std::size_t common = 0;
      if (prev != nullptr) {
        const std::size_t prev_triples = (prev->size() - 1) / 3;
        while (common < triples && common < prev_triples &&
               std::equal(po.key.begin() + 3 * common, po.key.begin() + 3 * common + 3,
                          prev->begin() + 3 * common)) {
          ++common;
        }
      }
      if (saved.empty()) {
        saved.emplace_back(n);
        saved_layer.push_back(0);
      }
      common = std::min(common, saved.size() - 1);
      saved.resize(common + 1, saved[0]);
      saved_layer.resize(common + 1);
      if (common == 0 && triples > 0) {
        // saved[0] is error free; first error layers only grow within a chunk.
        const std::size_t at = po.key[0];
        if (at < saved_layer[0]) {
          saved[0] = Statevector(n);
          saved_layer[0] = 0;
        }
        for (; saved_layer[0] < at; ++saved_layer[0]) apply_layer(saved[0], layers[saved_layer[0]]);
      }
      Statevector psi = saved[common];
      std::size_t i = saved_layer[common];
      for (std::size_t next = common; next < triples; ++next) {
        const std::size_t at = po.key[3 * next];
        for (; i < at; ++i) apply_layer(psi, layers[i]);
        psi.apply_pauli(po.key[3 * next + 1], po.key[3 * next + 2]);
        apply_layer(psi, layers[i]);
        ++i;
        if (next + 1 < kMaxCheckpoints) {
          saved.push_back(psi);
          saved_layer.push_back(i);
        }
      }
      for (; i < layers.size(); ++i) apply_layer(psi, layers[i]);
      Rng rng = make_stream(seed, {tag, 1, rank});
      po.counts = draw_outcomes(cumulative(psi.probabilities()), po.shots, rng);
      prev = &po.key;
    }
  });
  return out;
}

}  // namespace detail

SampleSet sample_noisy(const LayeredCircuit& circuit, std::uint64_t shots, std::uint64_t seed,
                       const SimOptions& options) {
  if (shots == 0) throw ValidationError("shots must be positive");
  const auto noisy = detail::noisy_layers(circuit);
  auto draw = [&noisy](Rng& rng, detail::PatternKey& key) {
    for (const auto& layer : noisy) {
      std::uint64_t x = 0, z = 0;
      for (std::size_t k = 0; k < layer.fire.size(); ++k) {
        if (uniform01(rng) < layer.fire[k]) {
          x ^= layer.x[k];
          z ^= layer.z[k];
        }
      }
      if (x | z) key.insert(key.end(), {layer.layer, x, z});
    }
    key.push_back(0);
  };
  SampleSet out{circuit.num_qubits(), {}, 0, seed, "noisy"};
  for (const auto& po : detail::sample_patterns(circuit, shots, seed, 1, draw, options)) {
    for (const auto& [x, c] : po.counts) out.add(x, c);
  }
  return out;
}

FidelityBound fidelity_upper_bound(const LayeredCircuit& u, const LayeredCircuit& v,
                                   std::uint64_t shots, double alpha, std::uint64_t seed,
                                   const SimOptions& options) {
  if (u.num_qubits() != v.num_qubits()) {
    throw ValidationError("fidelity_upper_bound: circuits act on different qubit counts");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  LayeredCircuit combined = u;
  combined.append(v.inverse());
  const SampleSet samples = sample_noisy(combined, shots, seed, options);
  const std::uint64_t kept = kept_count(shots, alpha);
  if (kept == 0) {
    throw ValidationError("alpha " + std::to_string(alpha) + " needs at least " +
                          std::to_string(minimum_shots(alpha)) + " shots");
  }
  auto it = samples.counts.find(0);
  const std::uint64_t zeros = it == samples.counts.end() ? 0 : it->second;
  FidelityBound out;
  out.kept = kept;
  out.zero_fraction = static_cast<double>(zeros) / static_cast<double>(shots);
  out.bound = static_cast<double>(std::min(zeros, kept)) / static_cast<double>(kept);
  const AnalyticCvar law = bernoulli_upper_law(out.zero_fraction, alpha);
  out.stderr_proxy = std::sqrt(law.variance / static_cast<double>(shots));
  return out;
}

namespace {

double value_tv(const SampleSet& a, const SampleSet& b,
                const std::function<double(Bitstring)>& h) {
  std::map<double, double> diff;
  for (const auto& [x, c] : a.counts) diff[h(x)] += static_cast<double>(c) / a.shots;
  for (const auto& [x, c] : b.counts) diff[h(x)] -= static_cast<double>(c) / b.shots;
  double s = 0.0;
  for (const auto& [v, d] : diff) s += std::abs(d);
  return 0.5 * s;
}

double bitstring_tv(const SampleSet& a, const SampleSet& b) {
  std::map<Bitstring, double> diff;
  for (const auto& [x, c] : a.counts) diff[x] += static_cast<double>(c) / a.shots;
  for (const auto& [x, c] : b.counts) diff[x] -= static_cast<double>(c) / b.shots;
  double s = 0.0;
  for (const auto& [x, d] : diff) s += std::abs(d);
  return 0.5 * s;
}

}  // namespace

TwirlComparison twirl_compare(const LayeredCircuit& circuit,
                              const std::function<double(Bitstring)>& h, std::uint64_t shots,
                              int twirls, std::uint64_t seed, const SimOptions& options) {
  if (twirls < 1) throw ValidationError("twirl count must be >= 1");
  if (shots < static_cast<std::uint64_t>(twirls)) {
    throw ValidationError("shots must be at least the number of twirls");
  }
  const SampleSet plain = sample_noisy(circuit, shots, seed, options);
  SampleSet twirled{circuit.num_qubits(), {}, 0, seed, "noisy"};
  for (int t = 0; t < twirls; ++t) {
    Rng rng = make_stream(seed, {8, static_cast<std::uint64_t>(t)});
    const TwirledCircuit tc = insert_pauli_twirl(circuit, rng);
    const std::uint64_t part = shots / twirls + (static_cast<std::uint64_t>(t) < shots % twirls);
    const SampleSet s = sample_noisy(tc.circuit, part, rng(), options);
    for (const auto& [x, c] : s.counts) twirled.add(x, c);
  }
  TwirlComparison out;
  out.twirls = twirls;
  out.tv_values = value_tv(plain, twirled, h);
  out.tv_bitstrings = bitstring_tv(plain, twirled);
  if (circuit.num_qubits() <= options.dense_limit) {
    const Distribution exact = noisy_distribution_exact(circuit, options.dense_limit);
    out.tv_untwirled_exact = total_variation(empirical_distribution(plain), exact);
    out.tv_twirled_exact = total_variation(empirical_distribution(twirled), exact);
  }
  return out;
}

}  // namespace cvarbound
