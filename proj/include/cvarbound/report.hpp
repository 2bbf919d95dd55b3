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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvarbound/cvar.hpp"
#include "cvarbound/problems.hpp"
#include "cvarbound/simulator.hpp"

namespace cvarbound {

struct LayerFidelity {
  double fidelity = 1.0;
  int cnots = 1;
};

struct OverheadReport {
  std::vector<LayerFidelity> layers;
  double f_cx = 1.0;      // geometric mean CNOT fidelity
  double eplg = 0.0;      // 1 - f_cx
  double gamma_cx = 1.0;  // f_cx^-2
  int cnot_count = 0;
  double sqrt_gamma = 1.0;  // f_cx^-cnot_count
  double alpha = 1.0;       // 1 / sqrt_gamma
  std::optional<double> alpha_prime;
  std::optional<double> gamma_prime_cx;
};

OverheadReport derive_overheads(std::span<const LayerFidelity> layers, int cnot_count,
                                std::optional<double> alpha_prime = std::nullopt);

/// Smallest layer fidelity for which noisy sampling beats brute force at
/// depth p: 2^(-1/(3p)).
double min_layer_fidelity(int p);
/// Matching per-CNOT fidelity for dense n-qubit layers: 2^(-2/(3pn)).
double min_cnot_fidelity(int p, int n);

struct CdfPoint {
  double value = 0.0;
  double cumulative = 0.0;
};

std::vector<CdfPoint> empirical_cdf(const ValueSamples& samples);

struct BoundReport {
  int n = 0;
  std::uint64_t shots = 0;
  Sense sense = Sense::kMinimize;
  double alpha = 1.0;
  std::uint64_t kept = 0;
  double noisy_mean = 0.0;
  double lower_cvar = 0.0;
  double upper_cvar = 0.0;
  double best_sample = 0.0;
  std::optional<double> reference;
  std::optional<bool> reference_within_bounds;
  std::optional<double> optimum;
  std::optional<double> ratio_best;
  std::optional<double> ratio_cvar;  // upper CVaR when maximizing, lower when minimizing
  std::optional<double> ratio_mean;
  std::optional<int> cnot_count;
  std::optional<Calibration> calibration;
  std::vector<CdfPoint> cdf;
};

BoundReport bound_report(const SampleSet& samples, const IsingPolynomial& poly, double alpha,
                         std::optional<double> reference = std::nullopt,
                         std::optional<double> optimum = std::nullopt,
                         std::optional<int> cnot_count = std::nullopt);

std::string format_overhead(const OverheadReport& report);
std::string format_bound_report(const BoundReport& report);

}  // namespace cvarbound
