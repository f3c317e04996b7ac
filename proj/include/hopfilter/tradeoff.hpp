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

// Sweep of estimation quality against radio energy over (p, L). Both metrics
// are ratios against a reference: upsilon_h divides the lossy-design norm by
// the lossless-design norm (norms, not squared bounds); upsilon_e divides the
// expected packet energy at cap L by the expectation with no cap.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hopfilter/energy.hpp"
#include "hopfilter/hop_net.hpp"
#include "hopfilter/lmi_synthesis.hpp"
#include "hopfilter/mjls.hpp"

namespace hopfilter {

inline constexpr std::uint64_t kDefaultSeed = 20260501;

// Throws ZeroBaseline when lossless_norm <= 0.
double upsilon_h(double lossy_norm, double lossless_norm);

struct UpsilonE {
  double value = 0.0;  // closed form
  std::optional<double> monte_carlo;
  std::optional<double> standard_error;
};

UpsilonE upsilon_e(const HopNetworkConfig& config, const RadioEnergyParams& params, std::uint64_t trials = 0,
                   std::uint64_t seed = kDefaultSeed);

struct TradeoffPoint {
  double p = 0.0;
  int l = 0;
  int n = 0;
  double ps = 0.0;
  double lossless_norm = 0.0;
  std::optional<double> hinf_norm;
  std::optional<double> upsilon_h;
  double expected_tx = 0.0;
  double expected_rx = 0.0;
  double expected_energy_j = 0.0;
  double power_w = 0.0;
  double upsilon_e = 0.0;
  // Monte Carlo estimate of upsilon_e and its standard error (trials > 0).
  std::optional<double> upsilon_e_mc;
  std::optional<double> upsilon_e_se;
  bool feasible = false;
  // Solver status, or the error text for points without a certificate.
  std::string status;
};

struct SweepConfig {
  LtiPlant plant;
  std::vector<double> p_grid;
  int l_min = 1;
  int l_max = 8;
  int hops = 10;
  double ts = 0.05;
  RadioEnergyParams radio;
  std::uint64_t trials = 0;  // 0 = closed-form energy only
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;      // 0 = hardware concurrency
  SynthesisOptions synthesis;

  // Throws InvalidArgument or InvalidProbability.
  void validate() const;
};

struct SweepResult {
  double lossless_norm = 0.0;
  std::vector<TradeoffPoint> points;  // sorted by (p, L)
};

// Throws BaselineInfeasible when the lossless design fails.
SweepResult sweep(const SweepConfig& config);

// Smallest L with success_probability > 1 - slack, for extending a row until
// both metrics have settled.
int settling_cap(double p, int hops, double slack);

inline constexpr const char* kSweepCsvHeader =
    "p,L,N,P_S,lossless_norm,hinf_norm,upsilon_h,expected_tx,expected_rx,expected_energy_j,power_w,upsilon_e,feasible";

// Header plus one row per point. Shortest round-trip decimal formatting,
// independent of the locale; norm fields are empty for infeasible points.
std::string sweep_csv(const SweepResult& result);

}  // namespace hopfilter
