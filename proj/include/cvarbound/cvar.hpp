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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvarbound/pauli.hpp"
#include "cvarbound/simulator.hpp"

namespace cvarbound {

enum class Side { kLower, kUpper };

std::string side_name(Side side);
Side parse_side(const std::string& name);

/// Multiset of reals stored as sorted (value, count) atoms.
class ValueSamples {
 public:
  ValueSamples() = default;
  static ValueSamples from_values(std::span<const double> values);
  static ValueSamples from_counts(std::vector<std::pair<double, std::uint64_t>> atoms);
  static ValueSamples from_samples(const SampleSet& samples,
                                   const std::function<double(Bitstring)>& h);

  const std::vector<std::pair<double, std::uint64_t>>& atoms() const { return atoms_; }
  std::uint64_t total() const { return total_; }
  double mean() const;
  double min() const { return atoms_.front().first; }
  double max() const { return atoms_.back().first; }

 private:
  std::vector<std::pair<double, std::uint64_t>> atoms_;
  std::uint64_t total_ = 0;
};

class FiniteDistribution {
 public:
  FiniteDistribution() = default;
  /// Sorts and merges equal support points; probabilities must sum to 1.
  FiniteDistribution(std::vector<double> support, std::vector<double> probabilities);
  static FiniteDistribution from_distribution(const Distribution& dist,
                                              const std::function<double(Bitstring)>& h);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  double mean() const;
  FiniteDistribution negated() const;

 private:
  std::vector<double> support_;
  std::vector<double> probabilities_;
};

double cvar_exact(const FiniteDistribution& dist, double alpha);
double cvar_upper_exact(const FiniteDistribution& dist, double alpha);

/// floor(alpha * n), with a relative guard so alpha = k / n keeps k.
std::uint64_t kept_count(std::uint64_t n, double alpha);
std::uint64_t minimum_shots(double alpha);

struct CvarReport {
  double alpha = 1.0;
  Side side = Side::kLower;
  double value = 0.0;
  std::uint64_t kept = 0;
  std::optional<double> bootstrap_variance;
  std::optional<std::string> filter;
};

CvarReport cvar_empirical(const ValueSamples& samples, double alpha, Side side);

struct MixtureBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_holds = false;
  bool upper_holds = false;
};

MixtureBounds mixture_bounds(const FiniteDistribution& noisy, double c, double target,
                           double tolerance = 0.0);
MixtureBounds mixture_bounds(const ValueSamples& noisy, double c, double target,
                           double tolerance = 0.0);

/// Feasibility predicate with the penalties used for infeasible outcomes.
struct FeasibilityFilter {
  std::string name = "all";
  std::function<bool(Bitstring)> predicate;
  double penalty_low = 0.0;   // M_l, used for the upper side
  double penalty_high = 0.0;  // M_u, used for the lower side

  static FeasibilityFilter always(double penalty_low, double penalty_high);
  static FeasibilityFilter hamming_weight(int k, double penalty_low, double penalty_high);
  bool feasible(Bitstring x) const { return !predicate || predicate(x); }
};

/// Throws if some feasible outcome of an n-bit space violates
/// M_l <= h(x) <= M_u. Skipped above 24 bits, where it cannot be checked.
void validate_filter(const FeasibilityFilter& filter, int n,
                     const std::function<double(Bitstring)>& h);

struct FilteredCvar {
  CvarReport report;
  double lower = 0.0;  // filtered lower CVaR with M_u
  double upper = 0.0;  // filtered upper CVaR with M_l
  std::optional<double> post_selected_mean;
  double feasible_fraction = 0.0;
  /// Post-selected mean lies in [lower, upper]. Guaranteed when
  /// alpha <= feasible_fraction.
  bool sandwich_holds = false;
};

FilteredCvar cvar_filtered(const SampleSet& samples, const std::function<double(Bitstring)>& h,
                           const FeasibilityFilter& filter, double alpha, Side side);

/// Values of a diagonalized group observable on samples taken after the
/// group's basis rotation.
ValueSamples group_values(const SampleSet& rotated, const GroupDiagonalization& group);

double cvar_nondiagonal(std::span<const ValueSamples> per_group, double alpha, Side side);

enum class Saturation { kNone, kAtMinimum, kAtOne };

struct Calibration {
  double alpha = 1.0;
  Saturation saturation = Saturation::kNone;
  std::optional<double> gamma_per_cnot;
};

/// Largest alpha whose interpolated CVaR is still on the target's side.
Calibration calibrate_alpha(const ValueSamples& samples, double target, Side side,
                            std::optional<int> cnot_count = std::nullopt);
double gamma_per_cnot_from_alpha(double alpha, int cnot_count);

struct BootstrapResult {
  std::vector<double> alphas;
  std::vector<double> means;
  std::vector<double> variances;
  double slope = 0.0;  // least squares of log variance against log alpha
};

BootstrapResult bootstrap_variance(const ValueSamples& samples, std::span<const double> alphas,
                                   int resamples, std::uint64_t resample_size, std::uint64_t seed,
                                   Side side, int threads = 1);

double loglog_slope(std::span<const double> x, std::span<const double> y);

struct AnalyticCvar {
  double cvar = 0.0;
  double variance = 0.0;     // limiting variance of sqrt(n) (E_n - CVaR)
  double crude_bound = 0.0;  // E[X^2] / alpha^2
};

AnalyticCvar bernoulli_upper_law(double p, double alpha);
AnalyticCvar gaussian_lower_law(double alpha);
/// Density beta x^(-1-beta) on x >= 1, upper tail. Needs beta > 2.
AnalyticCvar powerlaw_upper_law(double beta, double alpha);

double normal_quantile(double p);
double normal_pdf(double x);
double normal_cdf(double x);

}  // namespace cvarbound
