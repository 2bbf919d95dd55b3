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
#include <vector>

#include "cvarbound/circuit.hpp"
#include "cvarbound/noise.hpp"
#include "cvarbound/simulator.hpp"

namespace cvarbound {

/// Inverse of one term w (.) + (1 - w) P (.) P as a signed mixture of the
/// identity and P conjugation.
struct QpdTerm {
  PauliString pauli;
  double coefficient_identity = 1.0;  // w / (2w - 1)
  double coefficient_pauli = 0.0;     // -(1 - w) / (2w - 1)
  double probability_identity = 1.0;  // w
  double probability_pauli = 0.0;     // 1 - w
  double gamma = 1.0;                 // |a_I| + |a_P| = exp(2 lambda)
};

struct QpdSpec {
  std::vector<QpdTerm> terms;
  double gamma = 1.0;
};

QpdSpec qpd_inverse(const PauliLindbladModel& model);

/// Outcomes of PEC circuits split by the sign of their quasiprobability.
struct PecSamples {
  SampleSet positive;
  SampleSet negative;
  double gamma = 1.0;
};

PecSamples sample_pec(const LayeredCircuit& circuit, std::uint64_t shots, std::uint64_t seed,
                      const SimOptions& options = {});

struct PecEstimate {
  double estimate = 0.0;
  double stderr_estimate = 0.0;  // sample std of gamma * sign * h over sqrt(shots)
  double variance = 0.0;         // per-shot sample variance
  double gamma = 1.0;
  std::uint64_t shots = 0;
};

PecEstimate pec_estimate(const PecSamples& samples, const std::function<double(Bitstring)>& h);
PecEstimate pec_expectation(const LayeredCircuit& circuit,
                            const std::function<double(Bitstring)>& h, std::uint64_t shots,
                            std::uint64_t seed, const SimOptions& options = {});

/// Diagonal of the sign-stripped mixture sampled by PEC. Each term keeps
/// the state with probability w^2 + (1 - w)^2.
Distribution pec_sampling_distribution(const LayeredCircuit& circuit,
                                       int dense_limit = kDefaultDenseLimit);

}  // namespace cvarbound
