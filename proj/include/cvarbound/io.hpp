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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "cvarbound/circuit.hpp"
#include "cvarbound/cvar.hpp"
#include "cvarbound/noise.hpp"
#include "cvarbound/problems.hpp"
#include "cvarbound/report.hpp"
#include "cvarbound/simulator.hpp"

namespace cvarbound {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json noise_to_json(const PauliLindbladModel& model);
PauliLindbladModel noise_from_json(const Json& j);

/// `base` resolves noise given as a file name inside a CNOT layer.
Json circuit_to_json(const LayeredCircuit& circuit);
LayeredCircuit circuit_from_json(const Json& j, const std::filesystem::path& base = {});

Json problem_to_json(const IsingPolynomial& poly);
IsingPolynomial problem_from_json(const Json& j);

Json graph_to_json(const Graph& graph);
Graph graph_from_json(const Json& j);
Json heavy_hex_to_json(const HeavyHexInstance& instance);
HeavyHexInstance heavy_hex_from_json(const Json& j);

Json params_to_json(const QaoaParams& params);
QaoaParams params_from_json(const Json& j);

/// Header `bitstring,count`, qubit 0 rightmost.
std::string sample_set_to_csv(const SampleSet& samples);
SampleSet sample_set_from_csv(const std::string& text);

Json distribution_to_json(const Distribution& dist);

Json cvar_report_to_json(const CvarReport& report);
Json overhead_to_json(const OverheadReport& report);
Json bound_report_to_json(const BoundReport& report);
Json bootstrap_to_json(const BootstrapResult& result);

/// Header `value,cumulative_probability`.
std::string cdf_to_csv(const std::vector<CdfPoint>& cdf);

std::string format_double(double v);

}  // namespace cvarbound
