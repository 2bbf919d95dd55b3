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


#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>

#include "cvarbound/errors.hpp"
#include "cvarbound/io.hpp"
#include "cvarbound/problems.hpp"
#include "cvarbound/simulator.hpp"
#include "testing/random_circuits.hpp"

namespace cvarbound {
namespace {

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

void expect_same_model(const PauliLindbladModel& a, const PauliLindbladModel& b) {
  ASSERT_EQ(a.num_qubits(), b.num_qubits());
  ASSERT_EQ(a.terms().size(), b.terms().size());
  for (std::size_t k = 0; k < a.terms().size(); ++k) {
    EXPECT_EQ(a.terms()[k].pauli, b.terms()[k].pauli);
    EXPECT_EQ(a.terms()[k].lambda, b.terms()[k].lambda);
  }
}

void expect_same_circuit(const LayeredCircuit& a, const LayeredCircuit& b) {
  ASSERT_EQ(a.num_qubits(), b.num_qubits());
  ASSERT_EQ(a.layers().size(), b.layers().size());
  for (std::size_t i = 0; i < a.layers().size(); ++i) {
    ASSERT_EQ(a.layers()[i].index(), b.layers()[i].index());
    if (const auto* one = std::get_if<SingleQubitLayer>(&a.layers()[i])) {
      const auto& other = std::get<SingleQubitLayer>(b.layers()[i]).gates;
      ASSERT_EQ(one->gates.size(), other.size());
      for (std::size_t q = 0; q < other.size(); ++q) {
        EXPECT_EQ(one->gates[q].kind, other[q].kind);
        // Fixed gates carry no angle on disk.
        if (other[q].kind == GateKind::kRz || other[q].kind == GateKind::kRx) {
          EXPECT_EQ(one->gates[q].angle, other[q].angle);
        }
      }
    } else {
      const auto& ca = std::get<CnotLayer>(a.layers()[i]);
      const auto& cb = std::get<CnotLayer>(b.layers()[i]);
      EXPECT_EQ(ca.pairs, cb.pairs);
      EXPECT_EQ(ca.label, cb.label);
      ASSERT_EQ(ca.noise.has_value(), cb.noise.has_value());
      if (ca.noise) expect_same_model(*ca.noise, *cb.noise);
    }
  }
}

void expect_same_problem(const IsingPolynomial& a, const IsingPolynomial& b) {
  EXPECT_EQ(a.n, b.n);
  EXPECT_EQ(a.sense, b.sense);
  EXPECT_EQ(a.offset, b.offset);
  EXPECT_EQ(a.linear, b.linear);
  EXPECT_EQ(a.quadratic, b.quadratic);
  EXPECT_EQ(a.cubic, b.cubic);
}

TEST(NoiseJson, RoundTripThroughText) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testing_util::random_model(5, 6, 0.3, rng);
    const Json j = Json::parse(noise_to_json(m).dump());
    expect_same_model(m, noise_from_json(j));
  }
}

TEST(NoiseJson, ReadsDocumentedLayout) {
  const auto m = noise_from_json(Json::parse(R"({"n": 3, "terms": [{"pauli": "IZZ", "lambda": 0.01}]})"));
  ASSERT_EQ(m.terms().size(), 1u);
  EXPECT_EQ(m.terms()[0].pauli.label(), "IZZ");
  EXPECT_DOUBLE_EQ(m.terms()[0].lambda, 0.01);
}

TEST(NoiseJson, ErrorsNameTheField) {
  EXPECT_NE(message_of([] { noise_from_json(Json::parse(R"({"terms": []})")); }).find("'n'"),
            std::string::npos);
  EXPECT_NE(message_of([] { noise_from_json(Json::parse(R"({"n": 2, "terms": [{"pauli": "ZZ"}]})")); })
                .find("'lambda'"),
            std::string::npos);
  EXPECT_NE(message_of([] { noise_from_json(Json::parse(R"({"n": 2, "terms": 3})")); }).find("'terms'"),
            std::string::npos);
  EXPECT_FALSE(message_of([] {
                 noise_from_json(Json::parse(R"({"n": 2, "terms": [{"pauli": "ZZ", "lambda": -1}]})"));
               }).empty());
}

TEST(CircuitJson, RandomCircuitsRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const LayeredCircuit c = testing_util::random_circuit(4, 3, true, 0.2, rng);
    expect_same_circuit(c, circuit_from_json(Json::parse(circuit_to_json(c).dump())));
  }
}

TEST(CircuitJson, NoiseByFileReference) {
  const auto dir = std::filesystem::temp_directory_path() / "cvarbound_io_test";
  std::filesystem::create_directories(dir);
  write_text_file(dir / "layer.json", R"({"n": 2, "terms": [{"pauli": "XZ", "lambda": 0.05}]})");
  const Json j = Json::parse(R"({"n": 2, "layers": [
      {"type": "1q", "gates": ["H", {"gate": "Rz", "angle": 0.25}]},
      {"type": "cnot", "pairs": [[0, 1]], "noise": "layer.json", "class": "even"}]})");
  const LayeredCircuit c = circuit_from_json(j, dir);
  ASSERT_EQ(c.layers().size(), 2u);
  const auto& cl = std::get<CnotLayer>(c.layers()[1]);
  EXPECT_EQ(cl.label, "even");
  ASSERT_TRUE(cl.noise.has_value());
  EXPECT_EQ(cl.noise->terms()[0].pauli.label(), "XZ");
  std::filesystem::remove_all(dir);
}

TEST(CircuitJson, ErrorsNameTheField) {
  EXPECT_NE(message_of([] { circuit_from_json(Json::parse(R"({"n": 2, "layers": [{"type": "swap"}]})")); })
                .find("'type'"),
            std::string::npos);
  EXPECT_NE(message_of([] {
              circuit_from_json(Json::parse(R"({"n": 2, "layers": [{"type": "cnot", "pairs": [[0]]}]})"));
            }).find("'pairs'"),
            std::string::npos);
  EXPECT_NE(message_of([] {
              circuit_from_json(Json::parse(R"({"n": 2, "layers": [{"type": "cnot", "pairs": [[0, 1]],
                                                "noise": "absent.json"}]})"));
            }).find("absent.json"),
            std::string::npos);
}

TEST(ProblemJson, GeneratedInstancesRoundTrip) {
  const IsingPolynomial maxcut = maxcut_3regular(12, 7).polynomial;
  expect_same_problem(maxcut, problem_from_json(Json::parse(problem_to_json(maxcut).dump())));
  const HeavyHexInstance hh = heavy_hex_preset("small", 3);
  const HeavyHexInstance back = heavy_hex_from_json(Json::parse(heavy_hex_to_json(hh).dump()));
  expect_same_problem(hh.polynomial, back.polynomial);
  EXPECT_EQ(hh.graph.edges, back.graph.edges);
  EXPECT_EQ(hh.v2, back.v2);
  EXPECT_EQ(hh.v3, back.v3);
  EXPECT_EQ(hh.w, back.w);
  EXPECT_EQ(hh.edge_color, back.edge_color);
}

TEST(ProblemJson, ReadsDocumentedLayout) {
  const IsingPolynomial p = problem_from_json(Json::parse(
      R"({"n": 3, "sense": "max", "linear": [[0, 1.5]], "quadratic": [[0, 2, -1]], "cubic": [[0, 1, 2, 0.5]]})"));
  EXPECT_EQ(p.sense, Sense::kMaximize);
  // x = 0b101: z = (-1, 1, -1).
  EXPECT_DOUBLE_EQ(p.evaluate(0b101), -1.5 - 1.0 + 0.5);
}

TEST(ProblemJson, ErrorsNameTheField) {
  EXPECT_NE(message_of([] { problem_from_json(Json::parse(R"({"n": 2})")); }).find("'sense'"),
            std::string::npos);
  EXPECT_NE(message_of([] {
              problem_from_json(Json::parse(R"({"n": 2, "sense": "max", "quadratic": [[0, 1]]})"));
            }).find("'quadratic'"),
            std::string::npos);
  EXPECT_NE(message_of([] { heavy_hex_from_json(Json::parse(R"({"rows": 1, "width": 2})")); }).find("'graph'"),
            std::string::npos);
}

TEST(ParamsJson, RoundTripAndValidation) {
  const QaoaParams p = published_angles(2);
  const QaoaParams back = params_from_json(Json::parse(params_to_json(p).dump()));
  EXPECT_EQ(back.p, 2);
  EXPECT_EQ(back.gammas, p.gammas);
  EXPECT_EQ(back.betas, p.betas);
  EXPECT_FALSE(message_of([] { params_from_json(Json::parse(R"({"p": 2, "gammas": [1], "betas": [1]})")); })
                   .empty());
}

TEST(SampleCsv, RoundTripQubitZeroRightmost) {
  SampleSet s{3, {}, 0, 0, "noisy"};
  s.add(0b001, 5);
  s.add(0b110, 2);
  const std::string csv = sample_set_to_csv(s);
  EXPECT_EQ(csv, "bitstring,count\n001,5\n110,2\n");
  const SampleSet back = sample_set_from_csv(csv);
  EXPECT_EQ(back.n, 3);
  EXPECT_EQ(back.shots, 7u);
  EXPECT_EQ(back.counts, s.counts);
}

TEST(SampleCsv, SampledSetsRoundTrip) {
  const LayeredCircuit c = build_qaoa(maxcut_3regular(6, 2).polynomial, {1, {0.6}, {0.4}});
  const SampleSet s = sample_noisy(with_uniform_cnot_noise(c, 0.05), 5000, 9);
  const SampleSet back = sample_set_from_csv(sample_set_to_csv(s));
  EXPECT_EQ(back.counts, s.counts);
  EXPECT_EQ(back.shots, s.shots);
}

TEST(SampleCsv, MalformedInputsAreRejected) {
  EXPECT_NE(message_of([] { sample_set_from_csv("x,y\n01,1\n"); }).find("bitstring,count"),
            std::string::npos);
  EXPECT_NE(message_of([] { sample_set_from_csv("bitstring,count\n01,abc\n"); }).find("count"),
            std::string::npos);
  EXPECT_NE(message_of([] { sample_set_from_csv("bitstring,count\n01,1\n011,1\n"); }).find("length"),
            std::string::npos);
  EXPECT_FALSE(message_of([] { sample_set_from_csv("bitstring,count\n"); }).empty());
}

TEST(TextFiles, MissingAndInvalidFiles) {
  EXPECT_NE(message_of([] { read_json_file("/nonexistent/cvarbound.json"); }).find("cannot read"),
            std::string::npos);
  const auto path = std::filesystem::temp_directory_path() / "cvarbound_bad.json";
  write_text_file(path, "{not json");
  EXPECT_NE(message_of([&] { read_json_file(path); }).find("not valid JSON"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(CdfCsv, Header) {
  const std::string csv = cdf_to_csv({{-1.0, 0.25}, {2.0, 1.0}});
  EXPECT_EQ(csv.rfind("value,cumulative_probability\n", 0), 0u);
}

}  // namespace
}  // namespace cvarbound
