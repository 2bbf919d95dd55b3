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

#include "cvarbound/pec.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "cvarbound/errors.hpp"
#include "cvarbound/trajectory.hpp"

namespace cvarbound {

QpdSpec qpd_inverse(const PauliLindbladModel& model) {
  QpdSpec spec;
  for (const auto& t : model.terms()) {
    const double w = no_flip_weight(t.lambda);
    const double contrast = 2.0 * w - 1.0;
    if (!(contrast > 0.0) || !std::isfinite(t.lambda)) {
      throw ValidationError("term " + t.pauli.label() + " has w <= 1/2 and cannot be inverted");
    }
    QpdTerm q;
    q.pauli = t.pauli;
    q.coefficient_identity = w / contrast;
    q.coefficient_pauli = -(1.0 - w) / contrast;
    q.probability_identity = w;
    q.probability_pauli = 1.0 - w;
    q.gamma = 1.0 / contrast;
    spec.gamma *= q.gamma;
    spec.terms.push_back(std::move(q));
  }
  return spec;
}

PecSamples sample_pec(const LayeredCircuit& circuit, std::uint64_t shots, std::uint64_t seed,
                      const SimOptions& options) {
  if (shots == 0) throw ValidationError("shots must be positive");
  const auto noisy = detail::noisy_layers(circuit);
  PecSamples out;
  for (const auto& layer : circuit.layers()) {
    if (const auto* c = std::get_if<CnotLayer>(&layer); c && c->noise) {
      out.gamma *= qpd_inverse(*c->noise).gamma;
    }
  }
  // The insertion and the noise fire independently with probability 1 - w
  // each; only their product matters for the state.
  auto draw = [&noisy](Rng& rng, detail::PatternKey& key) {
    std::uint64_t sign = 0;
    for (const auto& layer : noisy) {
      std::uint64_t x = 0, z = 0;
      for (std::size_t k = 0; k < layer.fire.size(); ++k) {
        const bool inserted = uniform01(rng) < layer.fire[k];
        const bool fired = uniform01(rng) < layer.fire[k];
        sign ^= static_cast<std::uint64_t>(inserted);
        if (inserted != fired) {
          x ^= layer.x[k];
          z ^= layer.z[k];
        }
      }
      if (x | z) key.insert(key.end(), {layer.layer, x, z});
    }
    key.push_back(sign);
  };
  out.positive = {circuit.num_qubits(), {}, 0, seed, "pec"};
  out.negative = {circuit.num_qubits(), {}, 0, seed, "pec"};
  for (const auto& po : detail::sample_patterns(circuit, shots, seed, 7, draw, options)) {
    SampleSet& target = po.key.back() ? out.negative : out.positive;
    for (const auto& [x, c] : po.counts) target.add(x, c);
  }
  return out;
}

PecEstimate pec_estimate(const PecSamples& samples, const std::function<double(Bitstring)>& h) {
  PecEstimate est;
  est.gamma = samples.gamma;
  est.shots = samples.positive.shots + samples.negative.shots;
  if (est.shots == 0) throw ValidationError("PEC estimate needs at least one shot");
  double sum = 0.0, sum_sq = 0.0;
  auto accumulate = [&](const SampleSet& s, double sign) {
    for (const auto& [x, c] : s.counts) {
      const double v = sign * samples.gamma * h(x);
      sum += v * static_cast<double>(c);
      sum_sq += v * v * static_cast<double>(c);
    }
  };
  accumulate(samples.positive, 1.0);
  accumulate(samples.negative, -1.0);
  const double n = static_cast<double>(est.shots);
  est.estimate = sum / n;
  est.variance = est.shots > 1 ? std::max(0.0, (sum_sq - n * est.estimate * est.estimate) / (n - 1))
                               : 0.0;
  est.stderr_estimate = std::sqrt(est.variance / n);
  return est;
}

PecEstimate pec_expectation(const LayeredCircuit& circuit,
                            const std::function<double(Bitstring)>& h, std::uint64_t shots,
                            std::uint64_t seed, const SimOptions& options) {
  return pec_estimate(sample_pec(circuit, shots, seed, options), h);
}

Distribution pec_sampling_distribution(const LayeredCircuit& circuit, int dense_limit) {
  if (circuit.num_qubits() > dense_limit) {
    throw ResourceLimitError("dense PEC distribution of " + std::to_string(circuit.num_qubits()) +
                             " qubits exceeds the limit of " + std::to_string(dense_limit));
  }
  DensityMatrix rho(circuit.num_qubits());
  for (const auto& layer : circuit.layers()) {
    const auto* c = std::get_if<CnotLayer>(&layer);
    if (!c || !c->noise) {
      apply_layer(rho, layer, dense_limit);
      continue;
    }
    qpd_inverse(*c->noise);
    for (const auto& t : c->noise->terms()) {
      const double w = no_flip_weight(t.lambda);
      rho.apply_pauli_mixture(low_word(t.pauli.x()), low_word(t.pauli.z()),
                              w * w + (1.0 - w) * (1.0 - w));
    }
    for (const auto& pair : c->pairs) rho.apply_cnot(pair.control, pair.target);
  }
  Distribution d{circuit.num_qubits(), rho.diagonal()};
  for (auto& p : d.probabilities) p = std::max(p, 0.0);
  return d;
}

}  // namespace cvarbound
