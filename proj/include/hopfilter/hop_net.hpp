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

// Hop-by-hop ARQ over a chain of N links. Every hop retries a packet until
// the link delivers it or L attempts are spent; a hop that gives up drops the
// packet for the rest of the path.

#include <cstdint>
#include <optional>
#include <vector>

#include "hopfilter/rng.hpp"

namespace hopfilter {

struct HopNetworkConfig {
  double p = 1.0;                 // per-attempt link delivery probability
  std::optional<int> max_attempts;  // L; nullopt means unbounded
  int hops = 10;                  // N, links on the source-sink path
  // Extension: count one acknowledgement per successful hop. Off by default.
  bool count_acks = false;

  bool unbounded() const { return !max_attempts.has_value(); }
  // Throws InvalidProbability or InvalidArgument.
  void validate() const;
};

struct PacketOutcome {
  bool delivered = false;
  std::int64_t tx_count = 0;
  std::int64_t rx_count = 0;
  std::int64_t sw_count = 0;
  std::int64_t ack_count = 0;
  std::vector<int> per_hop_tx;
};

struct ExpectedCounts {
  double tx = 0.0;
  double rx = 0.0;
  double sw = 0.0;
  double ack = 0.0;
};

struct TransportStats {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t delivered = 0;
  double delivery_rate = 0.0;
  double mean_tx = 0.0;
  double mean_rx = 0.0;
  double mean_sw = 0.0;
  double mean_ack = 0.0;
  // Unbiased sample variances of the per-packet counts.
  double var_tx = 0.0;
  double var_rx = 0.0;
  double var_sw = 0.0;
  double var_ack = 0.0;
  double cov_tx_rx = 0.0;
};

// [1 - (1-p)^L]^N; 1 for unbounded L.
double success_probability(const HopNetworkConfig& config);

// With q = 1-(1-p)^L: tx = (q/p)(1-q^N)/(1-q), rx = p*tx, sw = 2*tx.
ExpectedCounts expected_counts(const HopNetworkConfig& config);

PacketOutcome simulate_packet(const HopNetworkConfig& config, CounterStream& stream);

// Trial t draws from CounterStream(seed, t). Counts are accumulated as
// integers, so the result does not depend on threads (0 = hardware).
TransportStats monte_carlo(const HopNetworkConfig& config, std::uint64_t trials, std::uint64_t seed,
                           unsigned threads = 0);

}  // namespace hopfilter
