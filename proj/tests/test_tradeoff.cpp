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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hopfilter/error.hpp"
#include "hopfilter/tradeoff.hpp"
#include "test_util.hpp"

using namespace hopfilter;
using testutil::code_of;

namespace {

HopNetworkConfig cfg(double p, std::optional<int> l, int n) {
  HopNetworkConfig c;
  c.p = p;
  c.max_attempts = l;
  c.hops = n;
  return c;
}

SweepConfig small_sweep() {
  SweepConfig c;
  c.plant = fixture_pendulum();
  c.p_grid = {0.7};
  c.l_min = 1;
  c.l_max = 6;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("norm ratio") {
  CHECK(upsilon_h(0.3, 0.3) == 1.0);
  CHECK(upsilon_h(0.6, 0.3) == doctest::Approx(2.0));
  CHECK(code_of([] { upsilon_h(1.0, 0.0); }) == ErrorCode::kZeroBaseline);

  const auto plant = fixture_pendulum();
  const double lossless = synthesize(single_mode_model(plant)).hinf_norm;
  const double degenerate = synthesize(build_loss_model(plant, 1.0)).hinf_norm;
  CHECK(upsilon_h(degenerate, lossless) == doctest::Approx(1.0).epsilon(1e-6));

  // A lossy point the fixture can certify.
  const double ps = success_probability(cfg(0.7, 3, 10));
  const double lossy = synthesize(build_loss_model(plant, ps)).hinf_norm;
  CHECK(upsilon_h(lossy, lossless) > 1.0);
}

TEST_CASE("energy ratio") {
  const RadioEnergyParams radio;
  CHECK(upsilon_e(cfg(0.5, std::nullopt, 10), radio).value == 1.0);

  const auto e = upsilon_e(cfg(0.5, 1, 10), radio, 1000000, 99);
  CHECK(e.value == doctest::Approx(0.0999).epsilon(1e-3));
  REQUIRE(e.monte_carlo.has_value());
  REQUIRE(e.standard_error.has_value());
  CHECK(*e.monte_carlo == doctest::Approx(e.value).epsilon(0.01));
  CHECK(std::abs(*e.monte_carlo - e.value) <= 4.0 * *e.standard_error);
  CHECK_FALSE(upsilon_e(cfg(0.5, 1, 10), radio).monte_carlo.has_value());

  for (double p : {0.4, 0.7}) {
    double previous = 0.0;
    for (int l = 1; l <= 80; ++l) {
      const double v = upsilon_e(cfg(p, l, 10), radio).value;
      CHECK(v <= 1.0 + 1e-12);
      if (1.0 - previous > 1e-9) CHECK(v > previous);
      previous = v;
    }
    CHECK(previous == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("settling cap") {
  for (double p : {0.4, 0.7}) {
    const int cap = settling_cap(p, 10, 1e-6);
    CHECK(success_probability(cfg(p, cap, 10)) > 1.0 - 1e-6);
    CHECK(success_probability(cfg(p, cap - 1, 10)) <= 1.0 - 1e-6);
  }
}

TEST_CASE("sweep rows and CSV") {
  auto config = small_sweep();
  const auto result = sweep(config);
  REQUIRE(result.points.size() == 6);
  bool seen_feasible = false;
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& pt = result.points[i];
    CAPTURE(pt.l);
    CHECK(pt.l == static_cast<int>(i) + 1);
    CHECK(pt.n == 10);
    CHECK(pt.ps == doctest::Approx(success_probability(cfg(0.7, pt.l, 10))).epsilon(1e-15));
    CHECK(pt.power_w == doctest::Approx(pt.expected_energy_j / 0.05).epsilon(1e-15));
    CHECK(pt.upsilon_e <= 1.0 + 1e-9);
    if (seen_feasible) CHECK(pt.feasible);
    if (pt.feasible) {
      seen_feasible = true;
      REQUIRE(pt.upsilon_h.has_value());
      CHECK(*pt.upsilon_h >= 1.0 - 1e-9);
    } else {
      CHECK_FALSE(pt.hinf_norm.has_value());
      CHECK_FALSE(pt.status.empty());
    }
  }
  // P_S = 0.7^10 at L = 1 is far below what the unstable fixture tolerates.
  CHECK_FALSE(result.points.front().feasible);
  CHECK(result.points.back().feasible);

  const auto csv = lines(sweep_csv(result));
  REQUIRE(csv.size() == 7);
  CHECK(csv[0] == kSweepCsvHeader);
  CHECK(csv[1].starts_with("0.7,1,10,"));
  CHECK(csv[1].ends_with(",false"));
  CHECK(csv[1].find(",,,") != std::string::npos);
  CHECK(csv[6].ends_with(",true"));
  for (std::size_t i = 1; i < csv.size(); ++i) {
    CHECK(std::count(csv[i].begin(), csv[i].end(), ',') == 12);
  }

  config.threads = 1;
  CHECK(sweep_csv(sweep(config)) == sweep_csv(result));
}

TEST_CASE("sweep rows are sorted by p") {
  auto config = small_sweep();
  config.p_grid = {0.9, 0.8, 0.9};
  config.l_min = 4;
  config.l_max = 5;
  const auto result = sweep(config);
  REQUIRE(result.points.size() == 4);
  CHECK(result.points[0].p == 0.8);
  CHECK(result.points[1].l == 5);
  CHECK(result.points[2].p == 0.9);
}

TEST_CASE("sweep validation") {
  auto config = small_sweep();
  config.p_grid.clear();
  CHECK(code_of([&] { sweep(config); }) == ErrorCode::kInvalidArgument);
  config = small_sweep();
  config.l_min = 5;
  config.l_max = 4;
  CHECK(code_of([&] { sweep(config); }) == ErrorCode::kInvalidArgument);
  config = small_sweep();
  config.ts = 0.0;
  CHECK(code_of([&] { sweep(config); }) == ErrorCode::kInvalidArgument);
  config = small_sweep();
  config.p_grid = {1.2};
  CHECK(code_of([&] { sweep(config); }) == ErrorCode::kInvalidProbability);
}

TEST_CASE("undetectable plant has no baseline") {
  LtiPlant plant;
  plant.ts = 1.0;
  plant.matrices.a = Matrix::Constant(1, 1, 2.0);
  plant.matrices.j = Matrix::Constant(1, 1, 1.0);
  plant.matrices.cy = Matrix::Zero(1, 1);
  plant.matrices.ey = Matrix::Zero(1, 1);
  plant.matrices.cz = Matrix::Constant(1, 1, 1.0);
  plant.matrices.ez = Matrix::Zero(1, 1);
  auto config = small_sweep();
  config.plant = plant;
  CHECK(code_of([&] { sweep(config); }) == ErrorCode::kBaselineInfeasible);
}
