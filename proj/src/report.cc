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

#include "cvarbound/report.hpp"

#include <cmath>
#include <cstdio>

#include "cvarbound/errors.hpp"

namespace cvarbound {

namespace {

std::string row(const std::string& name, double value, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  char line[128];
  std::snprintf(line, sizeof line, "%-22s %s\n", name.c_str(), buf);
  return line;
}

}  // namespace

OverheadReport derive_overheads(std::span<const LayerFidelity> layers, int cnot_count,
                                std::optional<double> alpha_prime) {
  if (layers.empty()) throw ValidationError("need at least one layer fidelity");
  if (cnot_count < 1) throw ValidationError("CNOT count must be >= 1");
  OverheadReport r;
  r.layers.assign(layers.begin(), layers.end());
  double log_product = 0.0;
  int total = 0;
  for (const auto& l : layers) {
    if (!(l.fidelity > 0.0 && l.fidelity <= 1.0)) {
      throw ValidationError("layer fidelity must lie in (0, 1], got " +
                            std::to_string(l.fidelity));
    }
    if (l.cnots < 1) throw ValidationError("layer CNOT count must be >= 1");
    log_product += std::log(l.fidelity);
    total += l.cnots;
  }
  const double log_f = log_product / total;
  r.f_cx = std::exp(log_f);
  r.eplg = 1.0 - r.f_cx;
  r.gamma_cx = std::exp(-2.0 * log_f);
  r.cnot_count = cnot_count;
  r.sqrt_gamma = std::exp(-log_f * cnot_count);
  r.alpha = std::exp(log_f * cnot_count);
  if (alpha_prime) {
    r.alpha_prime = alpha_prime;
    r.gamma_prime_cx = gamma_per_cnot_from_alpha(*alpha_prime, cnot_count);
  }
  return r;
}

double min_layer_fidelity(int p) {
  if (p < 1) throw ValidationError("p must be >= 1");
  return std::pow(2.0, -1.0 / (3.0 * p));
}

double min_cnot_fidelity(int p, int n) {
  if (p < 1) throw ValidationError("p must be >= 1");
  if (n < 2) throw ValidationError("n must be >= 2");
  return std::pow(2.0, -2.0 / (3.0 * p * n));
}

std::vector<CdfPoint> empirical_cdf(const ValueSamples& samples) {
  std::vector<CdfPoint> out;
  std::uint64_t running = 0;
  const double n = static_cast<double>(samples.total());
  for (const auto& [v, c] : samples.atoms()) {
    running += c;
    out.push_back({v, static_cast<double>(running) / n});
  }
  return out;
}

BoundReport bound_report(const SampleSet& samples, const IsingPolynomial& poly, double alpha,
                         std::optional<double> reference, std::optional<double> optimum,
                         std::optional<int> cnot_count) {
  if (samples.n != poly.n) {
    throw ValidationError("samples have " + std::to_string(samples.n) +
                          " qubits, problem has " + std::to_string(poly.n));
  }
  const auto values =
      ValueSamples::from_samples(samples, [&](Bitstring x) { return poly.evaluate(x); });
  BoundReport r;
  r.n = samples.n;
  r.shots = samples.shots;
  r.sense = poly.sense;
  r.alpha = alpha;
  const CvarReport lower = cvar_empirical(values, alpha, Side::kLower);
  r.kept = lower.kept;
  r.lower_cvar = lower.value;
  r.upper_cvar = cvar_empirical(values, alpha, Side::kUpper).value;
  r.noisy_mean = values.mean();
  const bool maximize = poly.sense == Sense::kMaximize;
  r.best_sample = maximize ? values.max() : values.min();
  r.cnot_count = cnot_count;
  if (reference) {
    r.reference = reference;
    r.reference_within_bounds = r.lower_cvar <= *reference && *reference <= r.upper_cvar;
    r.calibration = calibrate_alpha(values, *reference, maximize ? Side::kUpper : Side::kLower,
                                    cnot_count);
  }
  if (optimum) {
    r.optimum = optimum;
    r.ratio_best = approximation_ratio(r.best_sample, *optimum);
    r.ratio_cvar = approximation_ratio(maximize ? r.upper_cvar : r.lower_cvar, *optimum);
    r.ratio_mean = approximation_ratio(r.noisy_mean, *optimum);
  }
  r.cdf = empirical_cdf(values);
  return r;
}

std::string format_overhead(const OverheadReport& r) {
  std::string s;
  for (std::size_t i = 0; i < r.layers.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "LF_%zu (%d CNOT)", i + 1, r.layers[i].cnots);
    s += row(name, r.layers[i].fidelity);
  }
  s += row("F_CX", r.f_cx, "%.6f");
  s += row("EPLG", r.eplg, "%.6f");
  s += row("gamma_CX", r.gamma_cx, "%.6f");
  s += row("#CNOT", r.cnot_count, "%.0f");
  s += row("sqrt(gamma)", r.sqrt_gamma, "%.6g");
  s += row("alpha", r.alpha, "%.6g");
  if (r.alpha_prime) {
    s += row("alpha'", *r.alpha_prime, "%.6g");
    s += row("gamma'_CX", *r.gamma_prime_cx, "%.6f");
  }
  return s;
}

std::string format_bound_report(const BoundReport& r) {
  std::string s;
  s += row("qubits", r.n, "%.0f");
  s += row("shots", static_cast<double>(r.shots), "%.0f");
  s += row("alpha", r.alpha);
  s += row("kept samples", static_cast<double>(r.kept), "%.0f");
  s += row("noisy mean", r.noisy_mean);
  s += row("lower CVaR", r.lower_cvar);
  s += row("upper CVaR", r.upper_cvar);
  s += row("best sample", r.best_sample);
  if (r.reference) {
    s += row("noise-free mean", *r.reference);
    s += std::string("within bounds          ") + (*r.reference_within_bounds ? "yes" : "no") + "\n";
    if (r.calibration) {
      s += row("alpha'", r.calibration->alpha);
      if (r.calibration->gamma_per_cnot) s += row("gamma'_CX", *r.calibration->gamma_per_cnot);
    }
  }
  if (r.optimum) {
    s += row("optimum", *r.optimum);
    s += row("ratio (best sample)", *r.ratio_best, "%.4f");
    s += row("ratio (CVaR)", *r.ratio_cvar, "%.4f");
    s += row("ratio (noisy mean)", *r.ratio_mean, "%.4f");
  }
  return s;
}

}  // namespace cvarbound
