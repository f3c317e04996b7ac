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


#include <doctest.h>

#include <filesystem>

#include "hopfilter/error.hpp"
#include "hopfilter/io.hpp"
#include "test_util.hpp"

using namespace hopfilter;
using testutil::code_of;
namespace fs = std::filesystem;

TEST_CASE("matrix round trip") {
  Matrix m(2, 3);
  m << 1.0, -2.5, 1e-17, 0.1, 3.0, -0.0;
  CHECK(io::matrix_from_json(io::matrix_to_json(m), 2, 3, "m") == m);
  CHECK(code_of([&] { io::matrix_from_json(io::matrix_to_json(m), 3, 2, "m"); }) == ErrorCode::kParseError);
}

TEST_CASE("model round trip") {
  const auto model = build_loss_model(fixture_pendulum(), 0.8);
  const auto text = io::model_to_json(model, 0.05).dump(2);
  const auto back = io::parse_model(text);
  REQUIRE(back.ts.has_value());
  CHECK(*back.ts == 0.05);
  REQUIRE(back.model.num_modes() == 2);
  CHECK(back.model.chain().transition() == model.chain().transition());
  CHECK(back.model.clusters().assignment() == model.clusters().assignment());
  for (int i = 0; i < 2; ++i) {
    CHECK(back.model.mode(i).a == model.mode(i).a);
    CHECK(back.model.mode(i).ey == model.mode(i).ey);
    CHECK(back.model.mode(i).cz == model.mode(i).cz);
  }
  CHECK(io::model_to_json(back.model, back.ts).dump(2) == text);
}

TEST_CASE("stored fixture matches the built-in constants") {
  const auto file = io::load_model(fs::path(HOPFILTER_DATA_DIR) / "pendulum.json");
  const LtiPlant plant = io::plant_from_model(file);
  const LtiPlant fixture = fixture_pendulum();
  CHECK(plant.matrices.a == fixture.matrices.a);
  CHECK(plant.matrices.j == fixture.matrices.j);
  CHECK(plant.ts == fixture.ts);
}

TEST_CASE("gains round trip") {
  const auto model = build_loss_model(fixture_pendulum(), 0.9);
  const auto result = synthesize(model);
  const auto back = io::gains_from_json(io::gains_to_json(result.gains), model);
  REQUIRE(back.num_clusters() == 2);
  for (int c = 0; c < 2; ++c) {
    CHECK(back.clusters[c].bf == result.gains.clusters[c].bf);
    CHECK(back.clusters[c].df == result.gains.clusters[c].df);
  }
}

TEST_CASE("radio round trip") {
  RadioEnergyParams radio;
  radio.i_tx_by_dbm[-5] = 0.012;
  radio.packet_bytes = 40;
  const auto back = io::radio_from_json(io::radio_to_json(radio));
  CHECK(back.i_tx_by_dbm == radio.i_tx_by_dbm);
  CHECK(back.packet_bytes == 40);
  CHECK(component_energies(back).tx_packet == doctest::Approx(component_energies(radio).tx_packet).epsilon(1e-15));
}

TEST_CASE("sweep config from the shipped grid") {
  const fs::path dir(HOPFILTER_DATA_DIR);
  const auto config = io::parse_sweep_config(io::read_file(dir / "sweep_grid.json"), dir);
  CHECK(config.p_grid == std::vector<double>{0.4, 0.5, 0.6, 0.7});
  CHECK(config.l_min == 1);
  CHECK(config.l_max == 8);
  CHECK(config.hops == 10);
  CHECK(config.ts == 0.05);
  CHECK(config.seed == kDefaultSeed);
  CHECK(config.plant.matrices.a == fixture_pendulum().matrices.a);
  CHECK(component_energies(config.radio).tx_packet == doctest::Approx(312.5e-6).epsilon(1e-12));
}

TEST_CASE("malformed input") {
  CHECK(code_of([] { io::parse_model("{not json"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { io::parse_model(R"({"n": 1, "m": 1, "q": 1, "r": 1})"); }) == ErrorCode::kParseError);
  CHECK(code_of([] {
          io::parse_model(R"({"n": 1, "m": 1, "q": 1, "r": 1, "modes": [
            {"A": [[0.5]], "J": [[1]], "Cy": [[1]], "Ey": [[0]], "Cz": [[1]], "Ez": [[0]]},
            {"A": [[0.5]], "J": [[1]], "Cy": [[0]], "Ey": [[0]], "Cz": [[1]], "Ez": [[0]]}]})");
        }) == ErrorCode::kParseError);
  CHECK(code_of([] { io::parse_sweep_config(R"({"plant": "fixture", "p": [0.5]})", "."); }) ==
        ErrorCode::kParseError);
  CHECK(code_of([] { io::read_file("/nonexistent/hopfilter/file.json"); }) == ErrorCode::kFileNotFound);
  CHECK(code_of([] { io::load_model("/nonexistent/hopfilter/file.json"); }) == ErrorCode::kFileNotFound);
}

TEST_CASE("write then read") {
  const fs::path path = fs::temp_directory_path() / "hopfilter_io_test.txt";
  io::write_file(path, "a,b\n1,2\n");
  CHECK(io::read_file(path) == "a,b\n1,2\n");
  // A regular file cannot act as a directory, even for root.
  CHECK(code_of([&] { io::write_file(path / "out.txt", "x"); }) == ErrorCode::kIoError);
  fs::remove(path);
}
