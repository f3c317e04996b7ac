// Copyright 2026 The hopfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// JSON and file plumbing shared by the command-line tool and the tests.
//
// Model file: {"n","m","q","r","modes":[{"A","J","Cy","Ey","Cz","Ez"}, ...],
// "chain":[[...]], "clusters":[...], "Ts"?}. Matrices are row-major arrays
// of rows; cluster indices start at 0. "Ts" is only needed where a plant is
// expected (single mode).

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hopfilter/energy.hpp"
#include "hopfilter/hop_net.hpp"
#include "hopfilter/lmi_synthesis.hpp"
#include "hopfilter/mjls.hpp"
#include "hopfilter/tradeoff.hpp"

namespace hopfilter::io {

using Json = nlohmann::ordered_json;

// FileNotFound or IoError.
std::string read_file(const std::filesystem::path& path);
// IoError. Creates missing parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

Json matrix_to_json(const Matrix& m);
// ParseError unless value is a rows x cols array of numbers. An empty array
// is accepted for 0-row or 0-column matrices.
Matrix matrix_from_json(const Json& value, int rows, int cols, std::string_view what);

struct ModelFile {
  MjlsModel model;
  std::optional<double> ts;
};

// ParseError for malformed JSON or shapes; model errors propagate.
ModelFile parse_model(std::string_view text);
ModelFile load_model(const std::filesystem::path& path);
Json model_to_json(const MjlsModel& model, std::optional<double> ts = std::nullopt);
Json plant_to_json(const LtiPlant& plant);
// InvalidArgument unless the file holds one mode and Ts.
LtiPlant plant_from_model(const ModelFile& file);

Json gains_to_json(const FilterGains& gains);
// Reads "gains" as written by synthesis_to_json, checked against the model.
FilterGains gains_from_json(const Json& value, const MjlsModel& model);
Json synthesis_to_json(const SynthesisResult& result, const CertificateReport& report);

Json stats_to_json(const TransportStats& stats, const HopNetworkConfig& config);
Json network_to_json(const HopNetworkConfig& config);

// Keys: voltage_v, i_tx_ma_by_dbm, i_rx_ma, i_sw_ma, t_sw_s, byte_time_s,
// packet_bytes, p_out_dbm, ack_bytes. Missing keys keep defaults.
RadioEnergyParams radio_from_json(const Json& value);
Json radio_to_json(const RadioEnergyParams& params);

// Sweep config: {"plant": "fixture" | path | model object, "p": [...],
// "L": [min, max], "N", "Ts", "radio": {...}, "trials", "seed", "threads"}.
// Relative plant paths resolve against base_dir.
SweepConfig parse_sweep_config(std::string_view text, const std::filesystem::path& base_dir);
Json sweep_config_to_json(const SweepConfig& config);
Json sweep_to_json(const SweepResult& result);

}  // namespace hopfilter::io
