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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvarbound/circuit.hpp"
#include "cvarbound/state.hpp"

namespace cvarbound {

inline constexpr int kDefaultStatevectorLimit = 24;

/// Measured computational-basis outcome, qubit 0 in bit 0.
using Bitstring = std::uint64_t;

std::string bitstring_label(Bitstring x, int n);
Bitstring parse_bitstring(const std::string& label);

struct SimOptions {
  int statevector_limit = kDefaultStatevectorLimit;
  int dense_limit = kDefaultDenseLimit;
  int threads = 1;
};

struct SampleSet {
  int n = 0;
  std::map<Bitstring, std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::string provenance;  // "ideal", "noisy" or "pec"

  void add(Bitstring x, std::uint64_t count);
};

struct Distribution {
  int n = 0;
  std::vector<double> probabilities;  // indexed by bitstring, length 2^n

  double at(Bitstring x) const { return probabilities[x]; }
};

void apply_layer(Statevector& psi, const Layer& layer);
void apply_layer(DensityMatrix& rho, const Layer& layer, int dense_limit);

Statevector statevector(const LayeredCircuit& circuit,
                        int limit = kDefaultStatevectorLimit);
Distribution ideal_distribution(const LayeredCircuit& circuit,
                                int limit = kDefaultStatevectorLimit);
Distribution noisy_distribution_exact(const LayeredCircuit& circuit,
                                      int dense_limit = kDefaultDenseLimit);
Distribution empirical_distribution(const SampleSet& samples);
double total_variation(const Distribution& a, const Distribution& b);

SampleSet sample_distribution(const Distribution& dist, std::uint64_t shots, std::uint64_t seed,
                              const std::string& provenance = "ideal");
SampleSet sample_noisy(const LayeredCircuit& circuit, std::uint64_t shots, std::uint64_t seed,
                       const SimOptions& options = {});

struct FidelityBound {
  double bound = 0.0;
  double stderr_proxy = 0.0;
  double zero_fraction = 0.0;
  std::uint64_t kept = 0;
};

/// Upper CVaR of the all-zeros indicator for V^dagger U sampled with the
/// noise attached to u and v.
FidelityBound fidelity_upper_bound(const LayeredCircuit& u, const LayeredCircuit& v,
                                   std::uint64_t shots, double alpha, std::uint64_t seed,
                                   const SimOptions& options = {});

struct TwirlComparison {
  double tv_values = 0.0;      // between the value distributions of h
  double tv_bitstrings = 0.0;  // between the bitstring distributions
  std::optional<double> tv_untwirled_exact;
  std::optional<double> tv_twirled_exact;
  int twirls = 0;
};

/// Samples the circuit as is and averaged over `twirls` random Pauli twirls
/// (shots split evenly), then compares both sample sets.
TwirlComparison twirl_compare(const LayeredCircuit& circuit,
                              const std::function<double(Bitstring)>& h, std::uint64_t shots,
                              int twirls, std::uint64_t seed, const SimOptions& options = {});

}  // namespace cvarbound
