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

#include "cvarbound/cvar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cvarbound/errors.hpp"
#include "cvarbound/random.hpp"

namespace cvarbound {

namespace {

using Atoms = std::vector<std::pair<double, std::uint64_t>>;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

Atoms merge_atoms(Atoms atoms) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.first)) throw ValidationError("sample values must be finite");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Atoms out;
  for (const auto& a : atoms) {
    if (a.second == 0) continue;
    if (!out.empty() && out.back().first == a.first) {
      out.back().second += a.second;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

// Mean of the k smallest (lower) or largest (upper) values of sorted atoms.
double tail_mean(const Atoms& atoms, std::uint64_t k, Side side) {
  double sum = 0.0;
  std::uint64_t left = k;
  auto take = [&](const std::pair<double, std::uint64_t>& a) {
    const std::uint64_t m = std::min(left, a.second);
    sum += a.first * static_cast<double>(m);
    left -= m;
  };
  if (side == Side::kLower) {
    for (auto it = atoms.begin(); it != atoms.end() && left > 0; ++it) take(*it);
  } else {
    for (auto it = atoms.rbegin(); it != atoms.rend() && left > 0; ++it) take(*it);
  }
  return sum / static_cast<double>(k);
}

double atoms_mean(const Atoms& atoms) {
  double sum = 0.0;
  std::uint64_t n = 0;
  for (const auto& [v, c] : atoms) {
    sum += v * static_cast<double>(c);
    n += c;
  }
  return sum / static_cast<double>(n);
}

}  // namespace

std::string side_name(Side side) { return side == Side::kLower ? "lower" : "upper"; }

Side parse_side(const std::string& name) {
  if (name == "lower") return Side::kLower;
  if (name == "upper") return Side::kUpper;
  throw ValidationError("side must be 'lower' or 'upper', got '" + name + "'");
}

ValueSamples ValueSamples::from_values(std::span<const double> values) {
  Atoms atoms;
  atoms.reserve(values.size());
  for (double v : values) atoms.emplace_back(v, 1);
  return from_counts(std::move(atoms));
}

ValueSamples ValueSamples::from_counts(std::vector<std::pair<double, std::uint64_t>> atoms) {
  ValueSamples s;
  s.atoms_ = merge_atoms(std::move(atoms));
  for (const auto& a : s.atoms_) s.total_ += a.second;
  if (s.total_ == 0) throw ValidationError("value samples must contain at least one value");
  return s;
}

ValueSamples ValueSamples::from_samples(const SampleSet& samples,
                                        const std::function<double(Bitstring)>& h) {
  Atoms atoms;
  atoms.reserve(samples.counts.size());
  for (const auto& [x, c] : samples.counts) atoms.emplace_back(h(x), c);
  return from_counts(std::move(atoms));
}

double ValueSamples::mean() const { return atoms_mean(atoms_); }

FiniteDistribution::FiniteDistribution(std::vector<double> support,
                                       std::vector<double> probabilities) {
  if (support.size() != probabilities.size() || support.empty()) {
    throw ValidationError("distribution support and probabilities must be non-empty and equal length");
  }
  std::vector<std::size_t> order(support.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  double total = 0.0;
  for (std::size_t i : order) {
    const double p = probabilities[i];
    if (!(p >= 0.0) || !std::isfinite(support[i])) {
      throw ValidationError("distribution needs finite support and nonnegative probabilities");
    }
    total += p;
    if (!support_.empty() && support_.back() == support[i]) {
      probabilities_.back() += p;
    } else {
      support_.push_back(support[i]);
      probabilities_.push_back(p);
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("distribution probabilities sum to " + std::to_string(total));
  }
}

FiniteDistribution FiniteDistribution::from_distribution(
    const Distribution& dist, const std::function<double(Bitstring)>& h) {
  std::vector<double> support, probs;
  for (std::size_t x = 0; x < dist.probabilities.size(); ++x) {
    if (dist.probabilities[x] <= 0.0) continue;
    support.push_back(h(x));
    probs.push_back(dist.probabilities[x]);
  }
  return FiniteDistribution(std::move(support), std::move(probs));
}

double FiniteDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) m += support_[i] * probabilities_[i];
  return m;
}

FiniteDistribution FiniteDistribution::negated() const {
  FiniteDistribution out;
  out.support_.assign(support_.rbegin(), support_.rend());
  for (auto& v : out.support_) v = -v;
  out.probabilities_.assign(probabilities_.rbegin(), probabilities_.rend());
  return out;
}

double cvar_exact(const FiniteDistribution& dist, double alpha) {
  check_alpha(alpha);
  if (alpha == 1.0) return dist.mean();
  const double c = 1.0 / alpha;
  const auto& x = dist.support();
  const auto& p = dist.probabilities();
  double cum = 0.0, partial = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (cum + p[i] >= alpha || i + 1 == x.size()) {
      return c * partial + x[i] * (1.0 - c * cum);
    }
    cum += p[i];
    partial += x[i] * p[i];
  }
  return dist.mean();
}

double cvar_upper_exact(const FiniteDistribution& dist, double alpha) {
  return -cvar_exact(dist.negated(), alpha);
}

std::uint64_t kept_count(std::uint64_t n, double alpha) {
  check_alpha(alpha);
  const double k = std::floor(alpha * static_cast<double>(n) * (1.0 + 1e-12));
  return std::min<std::uint64_t>(static_cast<std::uint64_t>(k), n);
}

std::uint64_t minimum_shots(double alpha) {
  check_alpha(alpha);
  return static_cast<std::uint64_t>(std::ceil(1.0 / alpha - 1e-12));
}

CvarReport cvar_empirical(const ValueSamples& samples, double alpha, Side side) {
  const std::uint64_t k = kept_count(samples.total(), alpha);
  if (k == 0) {
    throw ValidationError("alpha " + std::to_string(alpha) + " keeps no sample out of " +
                          std::to_string(samples.total()) + "; at least " +
                          std::to_string(minimum_shots(alpha)) + " shots are required");
  }
  CvarReport r;
  r.alpha = alpha;
  r.side = side;
  r.kept = k;
  r.value = tail_mean(samples.atoms(), k, side);
  return r;
}

MixtureBounds mixture_bounds(const FiniteDistribution& noisy, double c, double target,
                           double tolerance) {
  if (!(c >= 1.0) || !std::isfinite(c)) throw ValidationError("C must be finite and >= 1");
  MixtureBounds b;
  b.lower = cvar_exact(noisy, 1.0 / c);
  b.upper = cvar_upper_exact(noisy, 1.0 / c);
  b.lower_holds = b.lower <= target + tolerance;
  b.upper_holds = b.upper >= target - tolerance;
  return b;
}

MixtureBounds mixture_bounds(const ValueSamples& noisy, double c, double target,
                           double tolerance) {
  if (!(c >= 1.0) || !std::isfinite(c)) throw ValidationError("C must be finite and >= 1");
  MixtureBounds b;
  b.lower = cvar_empirical(noisy, 1.0 / c, Side::kLower).value;
  b.upper = cvar_empirical(noisy, 1.0 / c, Side::kUpper).value;
  b.lower_holds = b.lower <= target + tolerance;
  b.upper_holds = b.upper >= target - tolerance;
  return b;
}

FeasibilityFilter FeasibilityFilter::always(double penalty_low, double penalty_high) {
  if (penalty_low > penalty_high) throw ValidationError("filter needs M_l <= M_u");
  return {"all", nullptr, penalty_low, penalty_high};
}

FeasibilityFilter FeasibilityFilter::hamming_weight(int k, double penalty_low,
                                                    double penalty_high) {
  if (k < 0) throw ValidationError("Hamming weight must be >= 0");
  if (penalty_low > penalty_high) throw ValidationError("filter needs M_l <= M_u");
  return {"hamming-weight=" + std::to_string(k),
          [k](Bitstring x) { return std::popcount(x) == k; }, penalty_low, penalty_high};
}

void validate_filter(const FeasibilityFilter& filter, int n,
                     const std::function<double(Bitstring)>& h) {
  if (n > 24) return;
  for (Bitstring x = 0; x < (Bitstring{1} << n); ++x) {
    if (!filter.feasible(x)) continue;
    const double v = h(x);
    if (v < filter.penalty_low || v > filter.penalty_high) {
      throw ValidationError("filter '" + filter.name + "': feasible " + bitstring_label(x, n) +
                            " has value " + std::to_string(v) + " outside [M_l, M_u]");
    }
  }
}

FilteredCvar cvar_filtered(const SampleSet& samples, const std::function<double(Bitstring)>& h,
                           const FeasibilityFilter& filter, double alpha, Side side) {
  Atoms low_side, high_side;
  double feasible_sum = 0.0;
  std::uint64_t feasible = 0;
  for (const auto& [x, c] : samples.counts) {
    if (filter.feasible(x)) {
      const double v = h(x);
      low_side.emplace_back(v, c);
      high_side.emplace_back(v, c);
      feasible_sum += v * static_cast<double>(c);
      feasible += c;
    } else {
      low_side.emplace_back(filter.penalty_high, c);
      high_side.emplace_back(filter.penalty_low, c);
    }
  }
  FilteredCvar out;
  const auto lower_values = ValueSamples::from_counts(std::move(low_side));
  const auto upper_values = ValueSamples::from_counts(std::move(high_side));
  const CvarReport lower = cvar_empirical(lower_values, alpha, Side::kLower);
  const CvarReport upper = cvar_empirical(upper_values, alpha, Side::kUpper);
  out.lower = lower.value;
  out.upper = upper.value;
  out.report = side == Side::kLower ? lower : upper;
  out.report.filter = filter.name;
  out.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(samples.shots);
  if (feasible > 0) {
    const double m = feasible_sum / static_cast<double>(feasible);
    out.post_selected_mean = m;
    const double slack = 1e-12 * std::max(1.0, std::abs(m));
    out.sandwich_holds = out.lower <= m + slack && m <= out.upper + slack;
  }
  return out;
}

ValueSamples group_values(const SampleSet& rotated, const GroupDiagonalization& group) {
  return ValueSamples::from_samples(
      rotated, [&](Bitstring x) { return evaluate_diagonal(group.terms, x); });
}

double cvar_nondiagonal(std::span<const ValueSamples> per_group, double alpha, Side side) {
  if (per_group.empty()) throw ValidationError("cvar_nondiagonal: no groups");
  double total = 0.0;
  for (const auto& g : per_group) total += cvar_empirical(g, alpha, side).value;
  return total;
}

double gamma_per_cnot_from_alpha(double alpha, int cnot_count) {
  check_alpha(alpha);
  if (cnot_count < 1) throw ValidationError("CNOT count must be >= 1");
  return std::pow(alpha, -2.0 / cnot_count);
}

Calibration calibrate_alpha(const ValueSamples& samples, double target, Side side,
                            std::optional<int> cnot_count) {
  if (!std::isfinite(target)) throw ValidationError("calibration target must be finite");
  // Work on the lower side; the upper side is the lower side of -X.
  Atoms atoms = samples.atoms();
  double goal = target;
  if (side == Side::kUpper) {
    for (auto& a : atoms) a.first = -a.first;
    std::reverse(atoms.begin(), atoms.end());
    goal = -target;
  }
  const double n = static_cast<double>(samples.total());
  const double mean = atoms_mean(atoms);
  Calibration out;
  const double scale = std::max({1.0, std::abs(mean), std::abs(goal)});
  if (goal >= mean - 1e-12 * scale) {
    out.alpha = 1.0;
    if (goal > mean + 1e-12 * scale) out.saturation = Saturation::kAtOne;
  } else {
    double count = 0.0, sum = 0.0;
    for (const auto& [v, m] : atoms) {
      const double end = count + static_cast<double>(m);
      const double sum_end = sum + v * static_cast<double>(m);
      if (sum_end / end > goal) {
        if (count == 0.0) {
          out.alpha = 1.0 / n;
          out.saturation = Saturation::kAtMinimum;
        } else {
          // Partial atom: (sum + (kappa - count) v) / kappa == goal.
          const double kappa = (count * v - sum) / (v - goal);
          out.alpha = std::clamp(kappa / n, 1.0 / n, 1.0);
        }
        break;
      }
      count = end;
      sum = sum_end;
    }
  }
  if (cnot_count) out.gamma_per_cnot = gamma_per_cnot_from_alpha(out.alpha, *cnot_count);
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw ValidationError("slope needs distinct alphas");
  return sxy / sxx;
}

BootstrapResult bootstrap_variance(const ValueSamples& samples, std::span<const double> alphas,
                                   int resamples, std::uint64_t resample_size, std::uint64_t seed,
                                   Side side, int threads) {
  if (resamples < 2) throw ValidationError("bootstrap needs at least 2 resamples");
  if (alphas.empty()) throw ValidationError("bootstrap needs at least one alpha");
  const std::uint64_t m = resample_size == 0 ? samples.total() : resample_size;
  for (double a : alphas) {
    if (kept_count(m, a) == 0) {
      throw ValidationError("alpha " + std::to_string(a) + " needs resample size >= " +
                            std::to_string(minimum_shots(a)));
    }
  }
  const Atoms& atoms = samples.atoms();
  std::vector<double> cum_counts(atoms.size());
  double running = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    running += static_cast<double>(atoms[i].second);
    cum_counts[i] = running;
  }
  const std::size_t na = alphas.size();
  std::vector<double> values(static_cast<std::size_t>(resamples) * na);
  parallel_for(static_cast<std::size_t>(resamples), threads, [&](std::size_t b) {
    Rng rng = make_stream(seed, {3, b});
    Atoms draw = atoms;
    if (atoms.size() <= m) {
      // Multinomial counts as a chain of conditional binomials.
      std::uint64_t left = m;
      double mass_left = static_cast<double>(samples.total());
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double w = static_cast<double>(atoms[i].second);
        std::uint64_t c = left;
        if (i + 1 < atoms.size() && left > 0) {
          std::binomial_distribution<std::uint64_t> bin(left, std::min(1.0, w / mass_left));
          c = bin(rng);
        }
        draw[i].second = c;
        left -= c;
        mass_left -= w;
      }
    } else {
      for (auto& a : draw) a.second = 0;
      for (std::uint64_t s = 0; s < m; ++s) {
        const double u = uniform01(rng) * running;
        auto it = std::upper_bound(cum_counts.begin(), cum_counts.end(), u);
        if (it == cum_counts.end()) --it;
        ++draw[it - cum_counts.begin()].second;
      }
    }
    for (std::size_t a = 0; a < na; ++a) {
      values[b * na + a] = tail_mean(draw, kept_count(m, alphas[a]), side);
    }
  });
  BootstrapResult out;
  out.alphas.assign(alphas.begin(), alphas.end());
  for (std::size_t a = 0; a < na; ++a) {
    double mean = 0.0;
    for (int b = 0; b < resamples; ++b) mean += values[b * na + a];
    mean /= resamples;
    double var = 0.0;
    for (int b = 0; b < resamples; ++b) {
      const double d = values[b * na + a] - mean;
      var += d * d;
    }
    out.means.push_back(mean);
    out.variances.push_back(var / (resamples - 1));
  }
  out.slope = na >= 2 ? loglog_slope(out.alphas, out.variances)
                      : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("normal quantile needs p in (0, 1)");
  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Newton step on the cdf.
  x -= (normal_cdf(x) - p) / normal_pdf(x);
  return x;
}

AnalyticCvar bernoulli_upper_law(double p, double alpha) {
  check_alpha(alpha);
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("Bernoulli p must lie in [0, 1]");
  AnalyticCvar out;
  out.cvar = std::min(p / alpha, 1.0);
  out.crude_bound = p / (alpha * alpha);
  if (std::abs(alpha - p) <= 1e-12 * std::max(alpha, p)) {
    out.variance = p > 0.0 ? (1.0 - p) / p * (0.5 - 0.5 / std::numbers::pi) : 0.0;
  } else if (alpha > p) {
    out.variance = p * (1.0 - p) / (alpha * alpha);
  }
  return out;
}

AnalyticCvar gaussian_lower_law(double alpha) {
  check_alpha(alpha);
  AnalyticCvar out;
  out.crude_bound = 1.0 / (alpha * alpha);
  if (alpha == 1.0) {
    out.cvar = 0.0;
    out.variance = 1.0;
    return out;
  }
  const double x = normal_quantile(alpha);
  const double f = normal_pdf(x);
  out.cvar = -f / alpha;
  out.variance = (1.0 - x * f / alpha - f * f / (alpha * alpha)) / alpha;
  return out;
}

AnalyticCvar powerlaw_upper_law(double beta, double alpha) {
  check_alpha(alpha);
  if (!(beta > 2.0)) throw ValidationError("power-law variance needs beta > 2");
  AnalyticCvar out;
  out.cvar = beta / (beta - 1.0) * std::pow(alpha, -1.0 / beta);
  out.variance = beta / ((beta - 1.0) * (beta - 1.0) * (beta - 2.0)) * std::pow(alpha, -2.0 / beta);
  out.crude_bound = beta / (beta - 2.0) / (alpha * alpha);
  return out;
}

}  // namespace cvarbound
