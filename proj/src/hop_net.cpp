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


#include "hopfilter/hop_net.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "hopfilter/error.hpp"

namespace hopfilter {

void HopNetworkConfig::validate() const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidProbability, "link probability must lie in (0, 1], got " + std::to_string(p));
  }
  if (hops < 1) throw Error(ErrorCode::kInvalidArgument, "hop count must be at least 1");
  if (max_attempts && *max_attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "retransmission cap must be at least 1");
  }
}

namespace {

// Probability a single hop succeeds within the cap.
double hop_success(const HopNetworkConfig& c) {
  if (c.unbounded() || c.p == 1.0) return 1.0;
  return -std::expm1(*c.max_attempts * std::log1p(-c.p));
}

}  // namespace

double success_probability(const HopNetworkConfig& config) {
  config.validate();
  return std::pow(hop_success(config), config.hops);
}

ExpectedCounts expected_counts(const HopNetworkConfig& config) {
  config.validate();
  const double n = config.hops;
  const double p = config.p;
  const double q = hop_success(config);
  ExpectedCounts out;
  if (q == 1.0) {
    out.tx = n / p;
  } else {
    // Attempts on one hop: E[min(Geom(p), L)] = q/p. Hop h is reached with
    // probability q^(h-1).
    // Both differences are formed without cancellation when q is near 1.
    const double fail = std::exp(*config.max_attempts * std::log1p(-p));
    out.tx = (q / p) * -std::expm1(n * std::log1p(-fail)) / fail;
  }
  out.rx = p * out.tx;
  out.sw = 2.0 * out.tx;
  if (config.count_acks) out.ack = out.rx;
  return out;
}

PacketOutcome simulate_packet(const HopNetworkConfig& config, CounterStream& stream) {
  PacketOutcome out;
  out.per_hop_tx.assign(config.hops, 0);
  const int cap = config.max_attempts.value_or(0);
  for (int h = 0; h < config.hops; ++h) {
    bool ok = false;
    int attempts = 0;
    while (!ok && (config.unbounded() || attempts < cap)) {
      ++attempts;
      ok = stream.bernoulli(config.p);
    }
    out.per_hop_tx[h] = attempts;
    out.tx_count += attempts;
    if (!ok) break;
    ++out.rx_count;
  }
  out.delivered = out.rx_count == config.hops;
  out.sw_count = 2 * out.tx_count;
  if (config.count_acks) out.ack_count = out.rx_count;
  return out;
}

namespace {

struct Tally {
  std::uint64_t delivered = 0;
  // Per count: sum and sum of squares.
  std::uint64_t tx = 0, tx2 = 0, rx = 0, rx2 = 0, txrx = 0, ack = 0, ack2 = 0;

  void add(const PacketOutcome& o) {
    const auto t = static_cast<std::uint64_t>(o.tx_count);
    const auto r = static_cast<std::uint64_t>(o.rx_count);
    const auto a = static_cast<std::uint64_t>(o.ack_count);
    delivered += o.delivered ? 1 : 0;
    tx += t;
    tx2 += t * t;
    rx += r;
    rx2 += r * r;
    txrx += t * r;
    ack += a;
    ack2 += a * a;
  }
  void merge(const Tally& o) {
    delivered += o.delivered;
    tx += o.tx;
    tx2 += o.tx2;
    rx += o.rx;
    rx2 += o.rx2;
    txrx += o.txrx;
    ack += o.ack;
    ack2 += o.ack2;
  }
};

double sample_covariance(std::uint64_t sum_a, std::uint64_t sum_b, std::uint64_t sum_ab, std::uint64_t n) {
  if (n < 2) return 0.0;
  const long double a = sum_a;
  const long double b = sum_b;
  return static_cast<double>((static_cast<long double>(sum_ab) - a * b / n) / (n - 1));
}

double sample_variance(std::uint64_t sum, std::uint64_t sum_sq, std::uint64_t n) {
  return std::max(sample_covariance(sum, sum, sum_sq, n), 0.0);
}

}  // namespace

TransportStats monte_carlo(const HopNetworkConfig& config, std::uint64_t trials, std::uint64_t seed,
                           unsigned threads) {
  config.validate();
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be at least 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  std::vector<Tally> partial(threads);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = trials * w / threads;
    const std::uint64_t end = trials * (w + 1) / threads;
    for (std::uint64_t t = begin; t < end; ++t) {
      CounterStream stream(seed, t);
      partial[w].add(simulate_packet(config, stream));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  Tally total;
  for (const auto& t : partial) total.merge(t);

  TransportStats s;
  s.trials = trials;
  s.seed = seed;
  s.delivered = total.delivered;
  const double n = static_cast<double>(trials);
  s.delivery_rate = total.delivered / n;
  s.mean_tx = total.tx / n;
  s.mean_rx = total.rx / n;
  s.mean_sw = 2.0 * s.mean_tx;
  s.mean_ack = total.ack / n;
  s.var_tx = sample_variance(total.tx, total.tx2, trials);
  s.var_rx = sample_variance(total.rx, total.rx2, trials);
  s.var_sw = 4.0 * s.var_tx;
  s.var_ack = sample_variance(total.ack, total.ack2, trials);
  s.cov_tx_rx = sample_covariance(total.tx, total.rx, total.txrx, trials);
  return s;
}

}  // namespace hopfilter
