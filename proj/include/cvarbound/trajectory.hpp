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

// Pattern-grouped trajectory sampling shared by the noisy sampler and PEC.
//
// Each shot draws one net Pauli insertion per noisy CNOT layer. Shots are
// drawn in fixed-size batches with substream (seed, tag, 0, batch), grouped
// by insertion pattern, and every distinct pattern is simulated once. Its
// outcomes are then drawn from the resulting Born distribution with
// substream (seed, tag, 1, rank). The sampled multiset is iid per shot and
// does not depend on the thread count.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "cvarbound/circuit.hpp"
#include "cvarbound/random.hpp"
#include "cvarbound/simulator.hpp"

namespace cvarbound::detail {

inline constexpr std::uint64_t kShotBatch = 1 << 14;

struct NoisyLayerTerms {
  std::size_t layer = 0;  // index into LayeredCircuit::layers()
  std::vector<std::uint64_t> x;
  std::vector<std::uint64_t> z;
  std::vector<double> fire;  // 1 - w_k
};

std::vector<NoisyLayerTerms> noisy_layers(const LayeredCircuit& circuit);

/// Pattern key: triples (layer, x, z) for every layer with a non-identity
/// insertion, then a trailing sign word (0 for +, 1 for -).
using PatternKey = std::vector<std::uint64_t>;

/// Fills `key` for one shot.
using PatternDraw = std::function<void(Rng&, PatternKey&)>;

struct PatternOutcomes {
  PatternKey key;
  std::uint64_t shots = 0;
  std::vector<std::pair<Bitstring, std::uint64_t>> counts;
};

std::vector<PatternOutcomes> sample_patterns(const LayeredCircuit& circuit, std::uint64_t shots,
                                             std::uint64_t seed, std::uint64_t tag,
                                             const PatternDraw& draw, const SimOptions& options);

}  // namespace cvarbound::detail
