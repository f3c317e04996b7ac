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


#include "hopfilter/energy.hpp"

#include <string>

#include "hopfilter/error.hpp"

namespace hopfilter {

void RadioEnergyParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be positive");
  };
  positive(voltage, "voltage");
  positive(i_rx, "i_rx");
  positive(i_sw, "i_sw");
  positive(t_sw, "t_sw");
  positive(byte_time, "byte_time");
  for (const auto& [dbm, amps] : i_tx_by_dbm) positive(amps, "i_tx");
  if (packet_bytes < 1) throw Error(ErrorCode::kInvalidArgument, "packet length must be at least 1 byte");
  if (ack_bytes < 1) throw Error(ErrorCode::kInvalidArgument, "ack length must be at least 1 byte");
}

ComponentEnergies component_energies(const RadioEnergyParams& params) {
  params.validate();
  const auto it = params.i_tx_by_dbm.find(params.p_out_dbm);
  if (it == params.i_tx_by_dbm.end()) {
    throw Error(ErrorCode::kUnknownPowerLevel, "no TX current for " + std::to_string(params.p_out_dbm) + " dBm");
  }
  ComponentEnergies c;
  c.tx_packet = params.voltage * it->second * params.byte_time * params.packet_bytes;
  c.rx_packet = params.voltage * params.i_rx * params.byte_time * params.packet_bytes;
  c.sw_once = params.voltage * params.i_sw * params.t_sw;
  c.ack_tx = params.voltage * it->second * params.byte_time * params.ack_bytes;
  c.ack_rx = params.voltage * params.i_rx * params.byte_time * params.ack_bytes;
  return c;
}

namespace {

EnergyBreakdown combine(double tx, double rx, double sw, double ack, const ComponentEnergies& c) {
  EnergyBreakdown e;
  e.e_tx = tx * c.tx_packet;
  e.e_rx = rx * c.rx_packet;
  e.e_sw = sw * c.sw_once;
  if (ack > 0.0) {
    // Each acknowledgement is one more transmission, reception and switch pair.
    e.e_tx += ack * c.ack_tx;
    e.e_rx += ack * c.ack_rx;
    e.e_sw += 2.0 * ack * c.sw_once;
  }
  e.total = e.e_tx + e.e_rx + e.e_sw;
  return e;
}

}  // namespace

EnergyBreakdown packet_energy(const PacketOutcome& outcome, const RadioEnergyParams& params) {
  return combine(static_cast<double>(outcome.tx_count), static_cast<double>(outcome.rx_count),
                 static_cast<double>(outcome.sw_count), static_cast<double>(outcome.ack_count),
                 component_energies(params));
}

EnergyBreakdown expected_packet_energy(const HopNetworkConfig& config, const RadioEnergyParams& params) {
  const ExpectedCounts n = expected_counts(config);
  return combine(n.tx, n.rx, n.sw, n.ack, component_energies(params));
}

double power_per_time_unit(double expected_packet_energy, double ts) {
  if (!(ts > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sampling period must be positive");
  return expected_packet_energy / ts;
}

}  // namespace hopfilter
