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

// Command-line front end. Every subcommand that writes files also writes a
// manifest.json beside them; `replay` re-runs a manifest.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "cvarbound/circuit.hpp"
#include "cvarbound/cvar.hpp"
#include "cvarbound/errors.hpp"
#include "cvarbound/io.hpp"
#include "cvarbound/pec.hpp"
#include "cvarbound/problems.hpp"
#include "cvarbound/report.hpp"
#include "cvarbound/simulator.hpp"

namespace fs = std::filesystem;
using namespace cvarbound;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Common {
  std::string out_dir = ".";
  int threads = 1;
};

struct RunContext {
  std::string command;
  std::vector<std::string> args;
  fs::path out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;

  void write(const std::string& name, const std::string& text) {
    write_text_file(out_dir / name, text);
    outputs.push_back(name);
  }
  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }
};

std::string config_hash(const std::vector<std::string>& args) {
  // FNV-1a over the arguments, skipping ones that cannot change outputs.
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--threads" || args[i] == "--out-dir") {
      ++i;
      continue;
    }
    for (unsigned char c : args[i] + '\x1f') {
      h ^= c;
      h *= 1099511628211ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(RunContext& ctx) {
  if (ctx.outputs.empty()) return;
  Json m{{"tool", "cvarbound"},
         {"version", kVersion},
         {"compiler", __VERSION__},
         {"command", ctx.command},
         {"args", ctx.args},
         {"config_hash", config_hash(ctx.args)},
         {"seed", ctx.seed ? Json(*ctx.seed) : Json(nullptr)},
         {"outputs", ctx.outputs}};
  write_text_file(ctx.out_dir / "manifest.json", m.dump(2) + "\n");
}

fs::path resolve_out_dir(const std::string& flag) {
  if (const char* env = std::getenv("CVARBOUND_OUT_DIR"); env && *env) return env;
  return flag;
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const char* what) {
  if (!seed) throw ValidationError(std::string("--seed is required for ") + what);
  return *seed;
}

std::vector<LayerFidelity> parse_lfs(const std::vector<std::string>& specs) {
  std::vector<LayerFidelity> out;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument("colon");
      std::size_t used = 0;
      const double lf = std::stod(s.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("lf");
      const int cnots = std::stoi(s.substr(colon + 1), &used);
      if (colon + 1 + used != s.size()) throw std::invalid_argument("cnots");
      out.push_back({lf, cnots});
    } catch (const std::exception&) {
      throw ValidationError("--lf expects FIDELITY:CNOTS, got '" + s + "'");
    }
  }
  return out;
}

LayeredCircuit attach_noise(LayeredCircuit circuit, const std::optional<double>& lambda,
                            const std::string& noise_file) {
  if (lambda && !noise_file.empty()) {
    throw ValidationError("use either --lambda-per-cnot or --noise, not both");
  }
  if (lambda) {
    if (!(*lambda >= 0.0)) throw ValidationError("--lambda-per-cnot must be >= 0");
    return with_uniform_cnot_noise(circuit, *lambda);
  }
  if (!noise_file.empty()) {
    const PauliLindbladModel model = noise_from_json(read_json_file(noise_file));
    if (model.num_qubits() != circuit.num_qubits()) {
      throw ValidationError("noise model qubit count does not match the circuit");
    }
    for (auto& layer : circuit.mutable_layers()) {
      if (auto* c = std::get_if<CnotLayer>(&layer); c && !c->pairs.empty()) c->noise = model;
    }
  }
  return circuit;
}

std::function<double(Bitstring)> objective(const IsingPolynomial& poly) {
  return [&poly](Bitstring x) { return poly.evaluate(x); };
}

double mean_under(const Distribution& d, const IsingPolynomial& poly) {
  double m = 0.0;
  for (std::size_t x = 0; x < d.probabilities.size(); ++x) {
    if (d.probabilities[x] > 0.0) m += d.probabilities[x] * poly.evaluate(x);
  }
  return m;
}

std::optional<FeasibilityFilter> parse_filter(const std::string& spec, double low, double high) {
  if (spec.empty()) return std::nullopt;
  if (spec == "all") return FeasibilityFilter::always(low, high);
  if (spec.rfind("hamming:", 0) == 0) {
    try {
      return FeasibilityFilter::hamming_weight(std::stoi(spec.substr(8)), low, high);
    } catch (const std::invalid_argument&) {
    }
  }
  throw ValidationError("--filter must be 'all' or 'hamming:K', got '" + spec + "'");
}

// Subcommand option holders.

struct GenProblem {
  std::string kind;
  int nodes = 0;
  std::string preset;
  int rows = 0, width = 0;
  std::optional<std::uint64_t> seed;
};

struct RunQaoa {
  std::string problem, instance, layout, noise;
  int p = 1;
  std::vector<double> gammas, betas;
  bool published = false;
  int grid = 0;
  std::optional<double> lambda;
  std::uint64_t shots = 0;
  std::optional<std::uint64_t> seed;
};

struct CvarCmd {
  std::string problem, samples, side = "both", filter;
  std::vector<double> alphas;
  double penalty_low = 0.0, penalty_high = 0.0;
  std::optional<double> calibrate;
  std::optional<int> cnots;
};

struct PecCmd {
  std::string circuit, problem;
  std::uint64_t shots = 0;
  std::optional<std::uint64_t> seed;
  int dense_limit = kDefaultDenseLimit;
};

struct BoundsCmd {
  std::string problem, samples, circuit;
  std::optional<double> alpha, gamma, reference, optimum;
  bool brute = false;
  std::optional<int> cnots;
};

struct BootstrapCmd {
  std::string problem, samples, side = "lower";
  std::optional<double> bernoulli;
  std::uint64_t draws = 0;
  std::vector<double> alphas;
  int resamples = 1000;
  std::uint64_t size = 0;
  std::optional<std::uint64_t> seed;
};

struct OverheadCmd {
  std::vector<std::string> lfs;
  int cnots = 0;
  std::optional<double> alpha_prime;
  bool json = false;
};

struct MinLfCmd {
  int p = 1;
  std::optional<int> n;
  bool json = false;
};

struct TwirlCmd {
  std::string circuit, problem;
  std::uint64_t shots = 0;
  int twirls = 200;
  std::optional<std::uint64_t> seed;
};

struct ReplayCmd {
  std::string manifest;
};

void run_gen_problem(const GenProblem& o, RunContext& ctx) {
  const std::uint64_t seed = require_seed(o.seed, "gen-problem");
  ctx.seed = seed;
  if (o.kind == "maxcut-3reg") {
    const MaxcutInstance inst = maxcut_3regular(o.nodes, seed);
    ctx.write_json("problem.json", problem_to_json(inst.polynomial));
    ctx.write_json("graph.json", graph_to_json(inst.graph));
  } else if (o.kind == "heavy-hex") {
    HeavyHexInstance inst;
    if (!o.preset.empty()) {
      inst = heavy_hex_preset(o.preset, seed);
    } else {
      inst = heavy_hex_instance(o.rows, o.width, seed);
    }
    ctx.write_json("problem.json", problem_to_json(inst.polynomial));
    ctx.write_json("instance.json", heavy_hex_to_json(inst));
  } else {
    throw ValidationError("--kind must be 'maxcut-3reg' or 'heavy-hex', got '" + o.kind + "'");
  }
  std::cout << "wrote " << (ctx.out_dir / "problem.json").string() << "\n";
}

void run_run_qaoa(const RunQaoa& o, const Common& common, RunContext& ctx) {
  if (o.problem.empty() == o.instance.empty()) {
    throw ValidationError("give exactly one of --problem or --instance");
  }
  std::optional<HeavyHexInstance> hh;
  IsingPolynomial poly;
  if (!o.instance.empty()) {
    hh = heavy_hex_from_json(read_json_file(o.instance));
    poly = hh->polynomial;
  } else {
    poly = problem_from_json(read_json_file(o.problem));
  }
  std::string layout = o.layout.empty() ? (hh ? "heavy-hex" : "generic") : o.layout;
  if (layout != "generic" && layout != "heavy-hex") {
    throw ValidationError("--layout must be 'generic' or 'heavy-hex'");
  }
  if (layout == "heavy-hex" && !hh) throw ValidationError("--layout heavy-hex needs --instance");

  QaoaParams params;
  const int modes = (o.published ? 1 : 0) + (o.grid > 0 ? 1 : 0) + (o.gammas.empty() ? 0 : 1);
  if (modes != 1) {
    throw ValidationError("choose exactly one of --gammas/--betas, --published or --grid");
  }
  Json search = nullptr;
  if (o.published) {
    params = published_angles(o.p);
  } else if (o.grid > 0) {
    if (o.p != 1) throw ValidationError("--grid supports p = 1 only");
    const GridResult g = grid_search_p1(poly, o.grid, common.threads);
    params = {1, {g.gamma}, {g.beta}};
    search = {{"steps", o.grid}, {"expectation", g.expectation}};
  } else {
    params = {o.p, o.gammas, o.betas};
  }
  params.validate();

  LayeredCircuit circuit =
      hh && layout == "heavy-hex" ? build_qaoa_heavy_hex(*hh, params) : build_qaoa(poly, params);
  circuit = attach_noise(std::move(circuit), o.lambda, o.noise);
  ctx.write_json("circuit.json", circuit_to_json(circuit));
  ctx.write_json("params.json", params_to_json(params));

  const CircuitStats st = stats(circuit);
  const double gamma = total_gamma(circuit);
  Json summary{{"n", poly.n},
               {"p", params.p},
               {"layout", layout},
               {"params", params_to_json(params)},
               {"cnot_count", st.cnot_count},
               {"cnot_depth", st.cnot_depth},
               {"per_class", st.per_class},
               {"gamma", gamma},
               {"sqrt_gamma", std::sqrt(gamma)},
               {"alpha", 1.0 / std::sqrt(gamma)}};
  if (!search.is_null()) summary["grid_search"] = search;
  if (poly.n <= kDefaultStatevectorLimit) {
    summary["noise_free_mean"] = mean_under(ideal_distribution(circuit), poly);
    const BruteForceResult bf = brute_force(poly, common.threads);
    summary["optimum"] = bf.best;
    summary["optimum_bitstring"] = bitstring_label(bf.argbest, poly.n);
  }
  if (o.shots > 0) {
    const std::uint64_t seed = require_seed(o.seed, "sampling");
    ctx.seed = seed;
    SimOptions opts;
    opts.threads = common.threads;
    const SampleSet samples = sample_noisy(circuit, o.shots, seed, opts);
    ctx.write("samples.csv", sample_set_to_csv(samples));
    const auto values = ValueSamples::from_samples(samples, objective(poly));
    summary["shots"] = o.shots;
    summary["noisy_mean"] = values.mean();
    summary["best_sample"] = poly.sense == Sense::kMaximize ? values.max() : values.min();
  }
  ctx.write_json("summary.json", summary);
  std::cout << summary.dump(2) << "\n";
}

void run_cvar(const CvarCmd& o, RunContext& ctx) {
  const IsingPolynomial poly = problem_from_json(read_json_file(o.problem));
  const SampleSet samples = sample_set_from_csv(read_text_file(o.samples));
  if (samples.n != poly.n) throw ValidationError("samples and problem differ in qubit count");
  if (o.alphas.empty()) throw ValidationError("--alpha is required");
  std::vector<Side> sides;
  if (o.side == "both") {
    sides = {Side::kLower, Side::kUpper};
  } else {
    sides = {parse_side(o.side)};
  }
  const auto h = objective(poly);
  const auto filter = parse_filter(o.filter, o.penalty_low, o.penalty_high);
  if (filter) validate_filter(*filter, poly.n, h);
  Json reports = Json::array();
  for (double alpha : o.alphas) {
    for (Side side : sides) {
      if (filter) {
        const FilteredCvar f = cvar_filtered(samples, h, *filter, alpha, side);
        Json j = cvar_report_to_json(f.report);
        j["post_selected_mean"] = f.post_selected_mean ? Json(*f.post_selected_mean) : Json(nullptr);
        j["feasible_fraction"] = f.feasible_fraction;
        j["filtered_lower"] = f.lower;
        j["filtered_upper"] = f.upper;
        j["sandwich_holds"] = f.sandwich_holds;
        reports.push_back(j);
      } else {
        reports.push_back(
            cvar_report_to_json(cvar_empirical(ValueSamples::from_samples(samples, h), alpha, side)));
      }
    }
  }
  Json out{{"shots", samples.shots}, {"reports", reports}};
  if (o.calibrate) {
    const Side side = poly.sense == Sense::kMaximize ? Side::kUpper : Side::kLower;
    const Calibration c =
        calibrate_alpha(ValueSamples::from_samples(samples, h), *o.calibrate, side, o.cnots);
    out["calibration"] = {{"target", *o.calibrate},
                          {"side", side_name(side)},
                          {"alpha_prime", c.alpha},
                          {"saturation", c.saturation == Saturation::kNone     ? "none"
                                         : c.saturation == Saturation::kAtOne ? "1"
                                                                                : "1/n"},
                          {"gamma_prime_cx", c.gamma_per_cnot ? Json(*c.gamma_per_cnot) : Json(nullptr)}};
  }
  ctx.write_json("cvar.json", out);
  std::cout << out.dump(2) << "\n";
}

void run_pec(const PecCmd& o, const Common& common, RunContext& ctx) {
  const std::uint64_t seed = require_seed(o.seed, "pec");
  ctx.seed = seed;
  if (o.shots == 0) throw ValidationError("--shots must be positive");
  const fs::path circuit_path(o.circuit);
  const LayeredCircuit circuit = circuit_from_json(read_json_file(circuit_path), circuit_path.parent_path());
  const IsingPolynomial poly = problem_from_json(read_json_file(o.problem));
  if (poly.n != circuit.num_qubits()) throw ValidationError("circuit and problem differ in qubit count");
  SimOptions opts;
  opts.threads = common.threads;
  opts.dense_limit = o.dense_limit;
  const PecSamples samples = sample_pec(circuit, o.shots, seed, opts);
  const PecEstimate est = pec_estimate(samples, objective(poly));
  ctx.write("pec_positive.csv", sample_set_to_csv(samples.positive));
  ctx.write("pec_negative.csv", sample_set_to_csv(samples.negative));
  const double gamma = total_gamma(circuit);
  Json out{{"shots", o.shots},
           {"estimate", est.estimate},
           {"stderr", est.stderr_estimate},
           {"variance", est.variance},
           {"gamma", gamma},
           {"overhead", {{"sqrt_gamma", std::sqrt(gamma)}, {"gamma", gamma}, {"gamma_squared", gamma * gamma}}}};
  if (circuit.num_qubits() <= kDefaultStatevectorLimit) {
    const Distribution ideal = ideal_distribution(circuit);
    const double truth = mean_under(ideal, poly);
    double second = 0.0;
    for (std::size_t x = 0; x < ideal.probabilities.size(); ++x) {
      if (ideal.probabilities[x] > 0.0) second += ideal.probabilities[x] * std::pow(poly.evaluate(x), 2);
    }
    out["noise_free_mean"] = truth;
    out["z_score"] = est.stderr_estimate > 0.0 ? (est.estimate - truth) / est.stderr_estimate : 0.0;
    const double ideal_var = second - truth * truth;
    out["ideal_variance"] = ideal_var;
    if (ideal_var > 0.0) out["variance_ratio"] = est.variance / ideal_var;
    if (circuit.num_qubits() <= o.dense_limit) {
      const Distribution pec = pec_sampling_distribution(circuit, o.dense_limit);
      double slack = std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < pec.probabilities.size(); ++x) {
        slack = std::min(slack, pec.probabilities[x] - ideal.probabilities[x] / gamma);
      }
      out["pec_distribution_min_slack"] = slack;
      ctx.write_json("pec_distribution.json", distribution_to_json(pec));
    }
  }
  ctx.write_json("pec.json", out);
  std::cout << out.dump(2) << "\n";
}

void run_bounds(const BoundsCmd& o, const Common& common, RunContext& ctx) {
  const IsingPolynomial poly = problem_from_json(read_json_file(o.problem));
  const SampleSet samples = sample_set_from_csv(read_text_file(o.samples));
  if (o.alpha.has_value() == o.gamma.has_value()) {
    throw ValidationError("give exactly one of --alpha or --gamma");
  }
  if (o.gamma && !(*o.gamma >= 1.0)) throw ValidationError("--gamma must be >= 1");
  const double alpha = o.alpha ? *o.alpha : 1.0 / std::sqrt(*o.gamma);
  std::optional<double> reference = o.reference;
  if (!o.circuit.empty()) {
    if (reference) throw ValidationError("give either --reference or --circuit, not both");
    const fs::path path(o.circuit);
    const LayeredCircuit circuit = circuit_from_json(read_json_file(path), path.parent_path());
    reference = mean_under(ideal_distribution(circuit), poly);
  }
  std::optional<double> optimum = o.optimum;
  if (o.brute) {
    if (optimum) throw ValidationError("give either --optimum or --brute-force, not both");
    optimum = brute_force(poly, common.threads).best;
  }
  const BoundReport r = bound_report(samples, poly, alpha, reference, optimum, o.cnots);
  const std::string text = format_bound_report(r);
  ctx.write("report.txt", text);
  ctx.write_json("report.json", bound_report_to_json(r));
  ctx.write("cdf.csv", cdf_to_csv(r.cdf));
  std::cout << text;
}

void run_bootstrap(const BootstrapCmd& o, const Common& common, RunContext& ctx) {
  const std::uint64_t seed = require_seed(o.seed, "bootstrap-var");
  ctx.seed = seed;
  ValueSamples values;
  if (o.bernoulli) {
    if (!o.samples.empty()) throw ValidationError("give either --bernoulli or --samples");
    if (o.draws == 0) throw ValidationError("--draws must be positive with --bernoulli");
    const double p = *o.bernoulli;
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("--bernoulli must lie in [0, 1]");
    Rng rng = make_stream(seed, {9});
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < o.draws; ++i) ones += uniform01(rng) < p;
    values = ValueSamples::from_counts({{0.0, o.draws - ones}, {1.0, ones}});
  } else {
    if (o.problem.empty() || o.samples.empty()) {
      throw ValidationError("--problem and --samples are required without --bernoulli");
    }
    const IsingPolynomial poly = problem_from_json(read_json_file(o.problem));
    values = ValueSamples::from_samples(sample_set_from_csv(read_text_file(o.samples)), objective(poly));
  }
  if (o.alphas.empty()) throw ValidationError("--alpha is required");
  const BootstrapResult r = bootstrap_variance(values, o.alphas, o.resamples, o.size, seed,
                                               parse_side(o.side), common.threads);
  const Json j = bootstrap_to_json(r);
  ctx.write_json("bootstrap.json", j);
  std::cout << j.dump(2) << "\n";
}

void run_overhead(const OverheadCmd& o) {
  if (o.lfs.empty()) throw ValidationError("--lf is required");
  const auto layers = parse_lfs(o.lfs);
  const OverheadReport r = derive_overheads(layers, o.cnots, o.alpha_prime);
  if (o.json) {
    std::cout << overhead_to_json(r).dump(2) << "\n";
  } else {
    std::cout << format_overhead(r);
  }
}

void run_min_lf(const MinLfCmd& o) {
  const double lf = min_layer_fidelity(o.p);
  if (o.json) {
    Json j{{"p", o.p}, {"min_layer_fidelity", lf}};
    if (o.n) j["min_cnot_fidelity"] = min_cnot_fidelity(o.p, *o.n);
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::printf("min_layer_fidelity %.4f\n", lf);
  if (o.n) std::printf("min_cnot_fidelity  %.6f\n", min_cnot_fidelity(o.p, *o.n));
}

void run_twirl(const TwirlCmd& o, const Common& common, RunContext& ctx) {
  const std::uint64_t seed = require_seed(o.seed, "twirl-compare");
  ctx.seed = seed;
  if (o.shots == 0) throw ValidationError("--shots must be positive");
  const fs::path path(o.circuit);
  const LayeredCircuit circuit = circuit_from_json(read_json_file(path), path.parent_path());
  std::optional<IsingPolynomial> poly;
  if (!o.problem.empty()) {
    poly = problem_from_json(read_json_file(o.problem));
    if (poly->n != circuit.num_qubits()) throw ValidationError("circuit and problem differ in qubit count");
  }
  std::function<double(Bitstring)> h = [](Bitstring x) { return static_cast<double>(x); };
  if (poly) h = objective(*poly);
  SimOptions opts;
  opts.threads = common.threads;
  const TwirlComparison c = twirl_compare(circuit, h, o.shots, o.twirls, seed, opts);
  Json j{{"shots", o.shots},
         {"twirls", c.twirls},
         {"tv_values", c.tv_values},
         {"tv_bitstrings", c.tv_bitstrings}};
  if (c.tv_untwirled_exact) {
    j["tv_untwirled_exact"] = *c.tv_untwirled_exact;
    j["tv_twirled_exact"] = *c.tv_twirled_exact;
  }
  ctx.write_json("twirl.json", j);
  std::cout << j.dump(2) << "\n";
}

int run(std::vector<std::string> args);

void run_replay(const ReplayCmd& o, const std::string& out_override, int& status) {
  const Json m = read_json_file(o.manifest);
  if (!m.contains("args") || !m.at("args").is_array()) {
    throw ValidationError("manifest field 'args' is missing");
  }
  auto args = m.at("args").get<std::vector<std::string>>();
  if (!out_override.empty()) {
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--out-dir") args.erase(args.begin() + i, args.begin() + i + 2);
    }
    args.insert(args.end(), {"--out-dir", out_override});
  }
  status = run(args);
}

int run(std::vector<std::string> args) {
  CLI::App app{"Noisy circuit sampling with CVaR bounds on noise-free expectation values"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool writes) {
    sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    if (writes) {
      sub->add_option("--out-dir", common.out_dir,
                      "Output directory (CVARBOUND_OUT_DIR overrides)");
    }
  };

  GenProblem gen;
  auto* s_gen = app.add_subcommand("gen-problem", "Generate a MAXCUT or heavy-hex problem");
  s_gen->add_option("--kind", gen.kind, "maxcut-3reg or heavy-hex")->required();
  s_gen->add_option("--nodes", gen.nodes, "Node count for maxcut-3reg");
  s_gen->add_option("--preset", gen.preset, "Heavy-hex preset: 127 or small");
  s_gen->add_option("--rows", gen.rows, "Heavy-hex rows");
  s_gen->add_option("--width", gen.width, "Heavy-hex row width (width % 4 == 3)");
  s_gen->add_option("--seed", gen.seed, "RNG seed")->required();
  add_common(s_gen, true);

  RunQaoa rq;
  auto* s_run = app.add_subcommand("run-qaoa", "Build, simulate and sample a QAOA circuit");
  s_run->add_option("--problem", rq.problem, "Problem JSON");
  s_run->add_option("--instance", rq.instance, "Heavy-hex instance JSON");
  s_run->add_option("--layout", rq.layout, "generic or heavy-hex");
  s_run->add_option("--p", rq.p, "QAOA depth")->check(CLI::PositiveNumber);
  s_run->add_option("--gammas", rq.gammas, "Phase angles")->delimiter(',');
  s_run->add_option("--betas", rq.betas, "Mixer angles")->delimiter(',');
  s_run->add_flag("--published", rq.published, "Use the published 40-qubit angles");
  s_run->add_option("--grid", rq.grid, "Grid-search p = 1 angles with STEPS x STEPS points");
  s_run->add_option("--lambda-per-cnot", rq.lambda,
                    "Uniform noise: 15 two-qubit Pauli terms of lambda/15 per CNOT");
  s_run->add_option("--noise", rq.noise, "Noise model JSON attached to every CNOT layer");
  s_run->add_option("--shots", rq.shots, "Shots to sample (0 = none)");
  s_run->add_option("--seed", rq.seed, "RNG seed (required with --shots)");
  add_common(s_run, true);

  CvarCmd cv;
  auto* s_cvar = app.add_subcommand("cvar", "CVaR of sampled objective values");
  s_cvar->add_option("--problem", cv.problem, "Problem JSON")->required();
  s_cvar->add_option("--samples", cv.samples, "Sample CSV")->required();
  s_cvar->add_option("--alpha", cv.alphas, "CVaR levels")->delimiter(',')->required();
  s_cvar->add_option("--side", cv.side, "lower, upper or both");
  s_cvar->add_option("--filter", cv.filter, "Feasibility filter: all or hamming:K");
  s_cvar->add_option("--penalty-low", cv.penalty_low, "M_l for infeasible outcomes");
  s_cvar->add_option("--penalty-high", cv.penalty_high, "M_u for infeasible outcomes");
  s_cvar->add_option("--calibrate", cv.calibrate, "Fit alpha' so the CVaR equals TARGET");
  s_cvar->add_option("--cnots", cv.cnots, "CNOT count for gamma'_CX");
  add_common(s_cvar, true);

  PecCmd pc;
  auto* s_pec = app.add_subcommand("pec", "Probabilistic error cancellation estimate");
  s_pec->add_option("--circuit", pc.circuit, "Circuit JSON with attached noise")->required();
  s_pec->add_option("--problem", pc.problem, "Problem JSON")->required();
  s_pec->add_option("--shots", pc.shots, "Shots")->required();
  s_pec->add_option("--seed", pc.seed, "RNG seed")->required();
  s_pec->add_option("--dense-limit", pc.dense_limit, "Qubit limit for dense channels");
  add_common(s_pec, true);

  BoundsCmd bc;
  auto* s_bounds = app.add_subcommand("bounds-report", "CVaR bound report with CDF export");
  s_bounds->add_option("--problem", bc.problem, "Problem JSON")->required();
  s_bounds->add_option("--samples", bc.samples, "Sample CSV")->required();
  s_bounds->add_option("--alpha", bc.alpha, "CVaR level");
  s_bounds->add_option("--gamma", bc.gamma, "Noise strength; alpha = 1/sqrt(gamma)");
  s_bounds->add_option("--reference", bc.reference, "Noise-free expectation value");
  s_bounds->add_option("--circuit", bc.circuit, "Circuit JSON for a statevector reference");
  s_bounds->add_option("--optimum", bc.optimum, "Known optimum");
  s_bounds->add_flag("--brute-force", bc.brute, "Compute the optimum by enumeration");
  s_bounds->add_option("--cnots", bc.cnots, "CNOT count for gamma'_CX");
  add_common(s_bounds, true);

  BootstrapCmd bs;
  auto* s_boot = app.add_subcommand("bootstrap-var", "Bootstrap variance of CVaR against alpha");
  s_boot->add_option("--problem", bs.problem, "Problem JSON");
  s_boot->add_option("--samples", bs.samples, "Sample CSV");
  s_boot->add_option("--bernoulli", bs.bernoulli, "Draw Bernoulli(P) values instead");
  s_boot->add_option("--draws", bs.draws, "Number of Bernoulli draws");
  s_boot->add_option("--alpha", bs.alphas, "CVaR levels")->delimiter(',')->required();
  s_boot->add_option("--resamples", bs.resamples, "Bootstrap resamples B");
  s_boot->add_option("--size", bs.size, "Resample size m (default: sample count)");
  s_boot->add_option("--side", bs.side, "lower or upper");
  s_boot->add_option("--seed", bs.seed, "RNG seed")->required();
  add_common(s_boot, true);

  OverheadCmd oc;
  auto* s_over = app.add_subcommand("overhead", "Per-CNOT fidelity and sampling overhead");
  s_over->add_option("--lf", oc.lfs, "Layer fidelity as LF:CNOTS (repeatable)")->required();
  s_over->add_option("--cnots", oc.cnots, "CNOT count of the circuit")->required();
  s_over->add_option("--alpha-prime", oc.alpha_prime, "Fitted alpha' to invert");
  s_over->add_flag("--json", oc.json, "Print JSON");

  MinLfCmd ml;
  auto* s_min = app.add_subcommand("min-lf", "Layer fidelity needed to beat brute force");
  s_min->add_option("--p", ml.p, "QAOA depth")->required();
  s_min->add_option("--n", ml.n, "Qubit count for the per-CNOT threshold");
  s_min->add_flag("--json", ml.json, "Print JSON");

  TwirlCmd tw;
  auto* s_twirl = app.add_subcommand("twirl-compare", "Compare sampling with and without twirls");
  s_twirl->add_option("--circuit", tw.circuit, "Circuit JSON with attached noise")->required();
  s_twirl->add_option("--problem", tw.problem, "Problem JSON for value distributions");
  s_twirl->add_option("--shots", tw.shots, "Shots per arm")->required();
  s_twirl->add_option("--twirls", tw.twirls, "Random twirls")->check(CLI::PositiveNumber);
  s_twirl->add_option("--seed", tw.seed, "RNG seed")->required();
  add_common(s_twirl, true);

  ReplayCmd rp;
  std::string replay_out;
  auto* s_replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  s_replay->add_option("manifest", rp.manifest, "manifest.json")->required();
  s_replay->add_option("--out-dir", replay_out, "Write to this directory instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunContext ctx;
  ctx.command = sub->get_name();
  ctx.args = args;
  ctx.out_dir = resolve_out_dir(common.out_dir);
  try {
    if (sub == s_gen) run_gen_problem(gen, ctx);
    else if (sub == s_run) run_run_qaoa(rq, common, ctx);
    else if (sub == s_cvar) run_cvar(cv, ctx);
    else if (sub == s_pec) run_pec(pc, common, ctx);
    else if (sub == s_bounds) run_bounds(bc, common, ctx);
    else if (sub == s_boot) run_bootstrap(bs, common, ctx);
    else if (sub == s_over) run_overhead(oc);
    else if (sub == s_min) run_min_lf(ml);
    else if (sub == s_twirl) run_twirl(tw, common, ctx);
    else if (sub == s_replay) {
      int status = 0;
      run_replay(rp, replay_out, status);
      return status;
    }
    write_manifest(ctx);
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args));
}
