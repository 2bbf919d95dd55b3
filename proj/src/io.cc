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

#include "cvarbound/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

#include "cvarbound/errors.hpp"

namespace cvarbound {

namespace {

template <typename T>
T field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw ValidationError(std::string("missing field '") + name + "'");
  }
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("field '") + name + "' has the wrong type");
  }
}

template <typename T>
T element(const Json& j, std::size_t i, const char* context) {
  try {
    return j.at(i).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("malformed entry in '") + context + "'");
  }
}

const Json& array_field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name) || !j.at(name).is_array()) {
    throw ValidationError(std::string("field '") + name + "' must be an array");
  }
  return j.at(name);
}

Json gate_to_json(const Gate& g) {
  if (g.kind == GateKind::kRz || g.kind == GateKind::kRx) {
    return Json{{"gate", gate_name(g.kind)}, {"angle", g.angle}};
  }
  return gate_name(g.kind);
}

Gate gate_from_json(const Json& j) {
  if (j.is_string()) {
    const GateKind kind = parse_gate_kind(j.get<std::string>());
    if (kind == GateKind::kRz || kind == GateKind::kRx) {
      throw ValidationError("gate '" + j.get<std::string>() + "' needs an angle");
    }
    return {kind, 0.0};
  }
  return {parse_gate_kind(field<std::string>(j, "gate")), field<double>(j, "angle")};
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file '" + path.string() + "'");
  out << text;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json noise_to_json(const PauliLindbladModel& model) {
  Json terms = Json::array();
  for (const auto& t : model.terms()) terms.push_back({{"pauli", t.pauli.label()}, {"lambda", t.lambda}});
  return {{"n", model.num_qubits()}, {"terms", terms}};
}

PauliLindbladModel noise_from_json(const Json& j) {
  const int n = field<int>(j, "n");
  if (n < 1 || n > kMaxQubits) throw ValidationError("field 'n' must lie in [1, 128]");
  PauliLindbladModel model(n);
  for (const auto& t : array_field(j, "terms")) {
    model.add_term(PauliString::from_label(field<std::string>(t, "pauli")),
                   field<double>(t, "lambda"));
  }
  return model;
}

Json circuit_to_json(const LayeredCircuit& circuit) {
  Json layers = Json::array();
  for (const auto& layer : circuit.layers()) {
    if (const auto* one = std::get_if<SingleQubitLayer>(&layer)) {
      Json gates = Json::array();
      for (const auto& g : one->gates) gates.push_back(gate_to_json(g));
      layers.push_back({{"type", "1q"}, {"gates", gates}});
    } else {
      const auto& c = std::get<CnotLayer>(layer);
      Json pairs = Json::array();
      for (const auto& p : c.pairs) pairs.push_back({p.control, p.target});
      Json l{{"type", "cnot"}, {"pairs", pairs}};
      if (!c.label.empty()) l["class"] = c.label;
      if (c.noise) l["noise"] = noise_to_json(*c.noise);
      layers.push_back(l);
    }
  }
  return {{"n", circuit.num_qubits()}, {"layers", layers}};
}

LayeredCircuit circuit_from_json(const Json& j, const std::filesystem::path& base) {
  LayeredCircuit circuit(field<int>(j, "n"));
  for (const auto& l : array_field(j, "layers")) {
    const std::string type = field<std::string>(l, "type");
    if (type == "1q") {
      SingleQubitLayer layer;
      for (const auto& g : array_field(l, "gates")) layer.gates.push_back(gate_from_json(g));
      circuit.add_layer(std::move(layer));
    } else if (type == "cnot") {
      CnotLayer layer;
      const Json& pairs = array_field(l, "pairs");
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Json& p = pairs[i];
        if (!p.is_array() || p.size() != 2) throw ValidationError("field 'pairs' needs [control, target]");
        layer.pairs.push_back({element<int>(p, 0, "pairs"), element<int>(p, 1, "pairs")});
      }
      if (l.contains("class")) layer.label = field<std::string>(l, "class");
      if (l.contains("noise")) {
        const Json& noise = l.at("noise");
        layer.noise = noise.is_string() ? noise_from_json(read_json_file(base / noise.get<std::string>()))
                                        : noise_from_json(noise);
      }
      circuit.add_layer(std::move(layer));
    } else {
      throw ValidationError("field 'type' must be '1q' or 'cnot', got '" + type + "'");
    }
  }
  return circuit;
}

Json problem_to_json(const IsingPolynomial& poly) {
  Json linear = Json::array(), quadratic = Json::array(), cubic = Json::array();
  for (const auto& [v, c] : poly.linear) linear.push_back({v, c});
  for (const auto& [ij, c] : poly.quadratic) quadratic.push_back({ij.first, ij.second, c});
  for (const auto& [abc, c] : poly.cubic) cubic.push_back({abc[0], abc[1], abc[2], c});
  return {{"n", poly.n},           {"sense", sense_name(poly.sense)}, {"offset", poly.offset},
          {"linear", linear},      {"quadratic", quadratic},          {"cubic", cubic}};
}

IsingPolynomial problem_from_json(const Json& j) {
  IsingPolynomial poly;
  poly.n = field<int>(j, "n");
  if (poly.n < 1 || poly.n > kMaxQubits) throw ValidationError("field 'n' must lie in [1, 128]");
  poly.sense = parse_sense(field<std::string>(j, "sense"));
  if (j.contains("offset")) poly.offset = field<double>(j, "offset");
  auto terms = [&](const char* name, std::size_t width) {
    std::vector<Json> out;
    if (!j.contains(name)) return out;
    for (const auto& t : array_field(j, name)) {
      if (!t.is_array() || t.size() != width) {
        throw ValidationError(std::string("entries of '") + name + "' need " +
                              std::to_string(width) + " numbers");
      }
      out.push_back(t);
    }
    return out;
  };
  for (const auto& t : terms("linear", 2)) {
    poly.add_linear(element<int>(t, 0, "linear"), element<double>(t, 1, "linear"));
  }
  for (const auto& t : terms("quadratic", 3)) {
    poly.add_quadratic(element<int>(t, 0, "quadratic"), element<int>(t, 1, "quadratic"),
                       element<double>(t, 2, "quadratic"));
  }
  for (const auto& t : terms("cubic", 4)) {
    poly.add_cubic(element<int>(t, 0, "cubic"), element<int>(t, 1, "cubic"),
                   element<int>(t, 2, "cubic"), element<double>(t, 3, "cubic"));
  }
  poly.validate();
  return poly;
}

Json graph_to_json(const Graph& graph) {
  Json edges = Json::array();
  for (const auto& [a, b] : graph.edges) edges.push_back({a, b});
  return {{"n", graph.n}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) {
  Graph g;
  g.n = field<int>(j, "n");
  for (const auto& e : array_field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw ValidationError("field 'edges' needs [a, b] pairs");
    const int a = element<int>(e, 0, "edges"), b = element<int>(e, 1, "edges");
    if (a < 0 || b < 0 || a >= g.n || b >= g.n || a == b) {
      throw ValidationError("field 'edges' has an invalid edge");
    }
    g.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

Json heavy_hex_to_json(const HeavyHexInstance& inst) {
  return {{"kind", "heavy-hex"},        {"rows", inst.rows},   {"width", inst.width},
          {"graph", graph_to_json(inst.graph)}, {"v2", inst.v2}, {"v3", inst.v3},
          {"w", inst.w},                {"edge_colors", inst.edge_color},
          {"problem", problem_to_json(inst.polynomial)}};
}

HeavyHexInstance heavy_hex_from_json(const Json& j) {
  HeavyHexInstance inst;
  inst.rows = field<int>(j, "rows");
  inst.width = field<int>(j, "width");
  if (!j.contains("graph")) throw ValidationError("missing field 'graph'");
  inst.graph = graph_from_json(j.at("graph"));
  inst.v2 = field<std::vector<int>>(j, "v2");
  inst.v3 = field<std::vector<int>>(j, "v3");
  inst.w = field<std::vector<int>>(j, "w");
  inst.edge_color = field<std::vector<int>>(j, "edge_colors");
  if (!j.contains("problem")) throw ValidationError("missing field 'problem'");
  inst.polynomial = problem_from_json(j.at("problem"));
  return inst;
}

Json params_to_json(const QaoaParams& params) {
  return {{"p", params.p}, {"gammas", params.gammas}, {"betas", params.betas}};
}

QaoaParams params_from_json(const Json& j) {
  QaoaParams params{field<int>(j, "p"), field<std::vector<double>>(j, "gammas"),
                    field<std::vector<double>>(j, "betas")};
  params.validate();
  return params;
}

std::string sample_set_to_csv(const SampleSet& samples) {
  std::string out = "bitstring,count\n";
  for (const auto& [x, c] : samples.counts) {
    out += bitstring_label(x, samples.n) + "," + std::to_string(c) + "\n";
  }
  return out;
}

SampleSet sample_set_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("bitstring,count", 0) != 0) {
    throw ValidationError("sample CSV must start with the header 'bitstring,count'");
  }
  SampleSet s;
  s.provenance = "file";
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("sample CSV row '" + line + "' lacks a count");
    const std::string bits = line.substr(0, comma);
    if (s.n == 0) s.n = static_cast<int>(bits.size());
    if (static_cast<int>(bits.size()) != s.n) {
      throw ValidationError("sample CSV rows have different bitstring lengths");
    }
    std::uint64_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoull(line.substr(comma + 1), &used);
      if (comma + 1 + used != line.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("sample CSV row '" + line + "' has an invalid count");
    }
    s.add(parse_bitstring(bits), count);
  }
  if (s.shots == 0) throw ValidationError("sample CSV has no samples");
  return s;
}

Json distribution_to_json(const Distribution& dist) {
  Json probs = Json::object();
  for (std::size_t x = 0; x < dist.probabilities.size(); ++x) {
    if (dist.probabilities[x] > 0.0) probs[bitstring_label(x, dist.n)] = dist.probabilities[x];
  }
  return {{"n", dist.n}, {"probabilities", probs}};
}

Json cvar_report_to_json(const CvarReport& r) {
  Json j{{"alpha", r.alpha}, {"side", side_name(r.side)}, {"value", r.value}, {"kept", r.kept}};
  if (r.bootstrap_variance) j["bootstrap_variance"] = *r.bootstrap_variance;
  if (r.filter) j["filter"] = *r.filter;
  return j;
}

Json overhead_to_json(const OverheadReport& r) {
  Json layers = Json::array();
  for (const auto& l : r.layers) layers.push_back({{"lf", l.fidelity}, {"cnots", l.cnots}});
  Json j{{"layers", layers},         {"f_cx", r.f_cx},   {"eplg", r.eplg},
         {"gamma_cx", r.gamma_cx},   {"cnot_count", r.cnot_count},
         {"sqrt_gamma", r.sqrt_gamma}, {"alpha", r.alpha}};
  if (r.alpha_prime) {
    j["alpha_prime"] = *r.alpha_prime;
    j["gamma_prime_cx"] = *r.gamma_prime_cx;
  }
  return j;
}

Json bound_report_to_json(const BoundReport& r) {
  Json j{{"n", r.n},
         {"shots", r.shots},
         {"sense", sense_name(r.sense)},
         {"alpha", r.alpha},
         {"kept", r.kept},
         {"noisy_mean", r.noisy_mean},
         {"lower_cvar", r.lower_cvar},
         {"upper_cvar", r.upper_cvar},
         {"best_sample", r.best_sample},
         {"reference", optional_number(r.reference)},
         {"optimum", optional_number(r.optimum)},
         {"ratio_best", optional_number(r.ratio_best)},
         {"ratio_cvar", optional_number(r.ratio_cvar)},
         {"ratio_mean", optional_number(r.ratio_mean)}};
  if (r.reference_within_bounds) j["reference_within_bounds"] = *r.reference_within_bounds;
  if (r.cnot_count) j["cnot_count"] = *r.cnot_count;
  if (r.calibration) {
    j["alpha_prime"] = r.calibration->alpha;
    j["alpha_prime_saturation"] = r.calibration->saturation == Saturation::kNone     ? "none"
                                  : r.calibration->saturation == Saturation::kAtOne ? "1"
                                                                                      : "1/n";
    j["gamma_prime_cx"] = optional_number(r.calibration->gamma_per_cnot);
  }
  return j;
}

Json bootstrap_to_json(const BootstrapResult& r) {
  return {{"alphas", r.alphas},
          {"means", r.means},
          {"variances", r.variances},
          {"slope", std::isfinite(r.slope) ? Json(r.slope) : Json(nullptr)}};
}

std::string cdf_to_csv(const std::vector<CdfPoint>& cdf) {
  std::string out = "value,cumulative_probability\n";
  for (const auto& p : cdf) out += format_double(p.value) + "," + format_double(p.cumulative) + "\n";
  return out;
}

}  // namespace cvarbound
