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


#include "hopfilter/tradeoff.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "hopfilter/error.hpp"

namespace hopfilter {

double upsilon_h(double lossy_norm, double lossless_norm) {
  if (!(lossless_norm > 0.0)) throw Error(ErrorCode::kZeroBaseline, "lossless norm must be positive");
  return lossy_norm / lossless_norm;
}

UpsilonE upsilon_e(const HopNetworkConfig& config, const RadioEnergyParams& params, std::uint64_t trials,
                   std::uint64_t seed) {
  HopNetworkConfig uncapped = config;
  uncapped.max_attempts.reset();
  const double reference = expected_packet_energy(uncapped, params).total;
  UpsilonE out;
  out.value = expected_packet_energy(config, params).total / reference;
  if (trials > 0) {
    // Per-packet energy is a*tx + b*rx (sw = 2 tx, ack = rx when counted).
    const ComponentEnergies c = component_energies(params);
    const double a = c.tx_packet + 2.0 * c.sw_once;
    const double b = c.rx_packet + (config.count_acks ? c.ack_tx + c.ack_rx + 2.0 * c.sw_once : 0.0);
    const TransportStats s = monte_carlo(config, trials, seed);
    const double mean = a * s.mean_tx + b * s.mean_rx;
    const double var = a * a * s.var_tx + b * b * s.var_rx + 2.0 * a * b * s.cov_tx_rx;
    out.monte_carlo = mean / reference;
    out.standard_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials)) / reference;
  }
  return out;
}

void SweepConfig::validate() const {
  plant.validate();
  if (p_grid.empty()) throw Error(ErrorCode::kInvalidArgument, "p grid is empty");
  for (double p : p_grid) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidProbability, "grid probability must lie in (0, 1], got " + std::to_string(p));
    }
  }
  if (l_min < 1 || l_max < l_min) throw Error(ErrorCode::kInvalidArgument, "L range is empty");
  if (hops < 1) throw Error(ErrorCode::kInvalidArgument, "hop count must be at least 1");
  if (!(ts > 0.0)) throw Error(ErrorCode::kInvalidArgument, "Ts must be positive");
  radio.validate();
}

int settling_cap(double p, int hops, double slack) {
  HopNetworkConfig c{p, 1, hops};
  while (success_probability(c) <= 1.0 - slack) ++*c.max_attempts;
  return *c.max_attempts;
}

SweepResult sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  try {
    result.lossless_norm = synthesize(single_mode_model(config.plant), config.synthesis).hinf_norm;
  } catch (const Error& e) {
    throw Error(ErrorCode::kBaselineInfeasible, std::string("lossless design failed: ") + e.what());
  }

  std::vector<double> grid = config.p_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (double p : grid) {
    for (int l = config.l_min; l <= config.l_max; ++l) {
      TradeoffPoint pt;
      pt.p = p;
      pt.l = l;
      pt.n = config.hops;
      pt.lossless_norm = result.lossless_norm;
      result.points.push_back(pt);
    }
  }

  // Energy is cheap and done serially so Monte Carlo threads are not nested
  // inside the solver pool.
  for (auto& pt : result.points) {
    const HopNetworkConfig net{pt.p, pt.l, pt.n};
    pt.ps = success_probability(net);
    const ExpectedCounts counts = expected_counts(net);
    pt.expected_tx = counts.tx;
    pt.expected_rx = counts.rx;
    pt.expected_energy_j = expected_packet_energy(net, config.radio).total;
    pt.power_w = power_per_time_unit(pt.expected_energy_j, config.ts);
    const UpsilonE ue = upsilon_e(net, config.radio, config.trials, config.seed);
    pt.upsilon_e = ue.value;
    pt.upsilon_e_mc = ue.monte_carlo;
    pt.upsilon_e_se = ue.standard_error;
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < result.points.size(); i = next++) {
      TradeoffPoint& pt = result.points[i];
      try {
        const SynthesisResult r = synthesize(build_loss_model(config.plant, pt.ps), config.synthesis);
        pt.hinf_norm = r.hinf_norm;
        pt.upsilon_h = upsilon_h(r.hinf_norm, result.lossless_norm);
        pt.feasible = true;
        pt.status = r.status;
      } catch (const Error& e) {
        pt.feasible = false;
        pt.status = e.what();
      }
    }
  };
  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, result.points.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return result;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_number(std::string& out, int v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& pt : result.points) {
    append_number(out, pt.p);
    out += ',';
    append_number(out, pt.l);
    out += ',';
    append_number(out, pt.n);
    out += ',';
    append_number(out, pt.ps);
    out += ',';
    append_number(out, pt.lossless_norm);
    out += ',';
    if (pt.hinf_norm) append_number(out, *pt.hinf_norm);
    out += ',';
    if (pt.upsilon_h) append_number(out, *pt.upsilon_h);
    out += ',';
    append_number(out, pt.expected_tx);
    out += ',';
    append_number(out, pt.expected_rx);
    out += ',';
    append_number(out, pt.expected_energy_j);
    out += ',';
    append_number(out, pt.power_w);
    out += ',';
    append_number(out, pt.upsilon_e);
    out += ',';
    out += pt.feasible ? "true" : "false";
    out += '\n';
  }
  return out;
}

}  // namespace hopfilter
