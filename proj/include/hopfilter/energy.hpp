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

#include <map>

#include "hopfilter/hop_net.hpp"

namespace hopfilter {

// MICA2-class transceiver. Currents are drawn for byte_time per byte on air.
struct RadioEnergyParams {
  double voltage = 3.0;                                     // V
  std::map<int, double> i_tx_by_dbm{{0, 0.020}};            // A by output power
  double i_rx = 0.015;                                      // A
  double i_sw = 0.015;                                      // A during a switch
  double t_sw = 250e-6;                                     // s per switch
  double byte_time = 8.0 / 38400.0;                         // s per byte at 38.4 kbit/s
  int packet_bytes = 25;                                    // Lp
  int p_out_dbm = 0;
  int ack_bytes = 5;  // only used when acknowledgements are counted

  // Throws InvalidArgument.
  void validate() const;
};

struct ComponentEnergies {
  double tx_packet = 0.0;  // J per transmitted packet
  double rx_packet = 0.0;  // J per received packet
  double sw_once = 0.0;    // J per mode switch
  double ack_tx = 0.0;
  double ack_rx = 0.0;
};

struct EnergyBreakdown {
  double e_tx = 0.0;
  double e_rx = 0.0;
  double e_sw = 0.0;
  double total = 0.0;
};

// Throws UnknownPowerLevel when p_out_dbm has no current entry.
ComponentEnergies component_energies(const RadioEnergyParams& params);

EnergyBreakdown packet_energy(const PacketOutcome& outcome, const RadioEnergyParams& params);

// Expected energy of one packet from closed-form event counts.
EnergyBreakdown expected_packet_energy(const HopNetworkConfig& config, const RadioEnergyParams& params);

// Average power when one packet is sent every ts seconds.
double power_per_time_unit(double expected_packet_energy, double ts);

}  // namespace hopfilter
