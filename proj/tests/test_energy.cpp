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

#include <cmath>

#include "hopfilter/energy.hpp"
#include "hopfilter/error.hpp"
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

}  // namespace

TEST_CASE("component energies from the radio constants") {
  const RadioEnergyParams radio;
  const auto e = component_energies(radio);
  CHECK(e.sw_once == doctest::Approx(3.0 * 0.015 * 250e-6).epsilon(1e-14));
  CHECK(e.sw_once == doctest::Approx(11.25e-6).epsilon(1e-12));
  CHECK(e.tx_packet == doctest::Approx(312.5e-6).epsilon(1e-12));
  CHECK(e.rx_packet == doctest::Approx(234.375e-6).epsilon(1e-12));
  CHECK(e.ack_tx == doctest::Approx(312.5e-6 / 5.0).epsilon(1e-12));
  CHECK(e.ack_rx == doctest::Approx(234.375e-6 / 5.0).epsilon(1e-12));
}

TEST_CASE("packet energies are linear in packet length") {
  RadioEnergyParams radio;
  const auto base = component_energies(radio);
  radio.packet_bytes *= 2;
  const auto doubled = component_energies(radio);
  CHECK(doubled.tx_packet == doctest::Approx(2.0 * base.tx_packet).epsilon(1e-15));
  CHECK(doubled.rx_packet == doctest::Approx(2.0 * base.rx_packet).epsilon(1e-15));
  CHECK(doubled.sw_once == base.sw_once);
}

TEST_CASE("unknown output power is rejected") {
  RadioEnergyParams radio;
  radio.p_out_dbm = -5;
  CHECK(code_of([&] { component_energies(radio); }) == ErrorCode::kUnknownPowerLevel);
  radio.i_tx_by_dbm[-5] = 0.012;
  CHECK(component_energies(radio).tx_packet == doctest::Approx(3.0 * 0.012 * 25 * 8.0 / 38400.0));
}

TEST_CASE("radio validation") {
  RadioEnergyParams radio;
  radio.voltage = 0.0;
  CHECK(code_of([&] { radio.validate(); }) == ErrorCode::kInvalidArgument);
  radio = RadioEnergyParams{};
  radio.packet_bytes = 0;
  CHECK(code_of([&] { radio.validate(); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("energy of a single outcome") {
  const RadioEnergyParams radio;
  PacketOutcome none;
  const auto zero = packet_energy(none, radio);
  CHECK(zero.total == 0.0);

  PacketOutcome full;
  full.delivered = true;
  full.tx_count = 10;
  full.rx_count = 10;
  full.sw_count = 20;
  const auto e = packet_energy(full, radio);
  CHECK(e.e_tx == doctest::Approx(10 * 312.5e-6).epsilon(1e-12));
  CHECK(e.e_rx == doctest::Approx(10 * 234.375e-6).epsilon(1e-12));
  CHECK(e.e_sw == doctest::Approx(20 * 11.25e-6).epsilon(1e-12));
  CHECK(e.total == doctest::Approx(5693.75e-6).epsilon(1e-12));
  CHECK(power_per_time_unit(e.total, 0.05) == doctest::Approx(113.875e-3).epsilon(1e-12));
  CHECK(code_of([] { power_per_time_unit(1.0, 0.0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("expected energy matches a perfect link") {
  const RadioEnergyParams radio;
  CHECK(expected_packet_energy(cfg(1.0, 1, 10), radio).total == doctest::Approx(5693.75e-6).epsilon(1e-12));
}

TEST_CASE("expected energy agrees with Monte Carlo") {
  const RadioEnergyParams radio;
  const auto c = cfg(0.5, 3, 10);
  const auto stats = monte_carlo(c, 200000, 17);
  const auto parts = component_energies(radio);
  const double mc = stats.mean_tx * parts.tx_packet + stats.mean_rx * parts.rx_packet + stats.mean_sw * parts.sw_once;
  CHECK(mc == doctest::Approx(expected_packet_energy(c, radio).total).epsilon(0.01));
}

TEST_CASE("expected energy grows with the retransmission cap") {
  const RadioEnergyParams radio;
  double previous = 0.0;
  for (int l = 1; l <= 12; ++l) {
    const double e = expected_packet_energy(cfg(0.5, l, 10), radio).total;
    CHECK(e > previous);
    previous = e;
  }
  CHECK(previous < expected_packet_energy(cfg(0.5, std::nullopt, 10), radio).total);
}
