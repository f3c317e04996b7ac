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

#include "hopfilter/error.hpp"
#include "hopfilter/hop_net.hpp"
#include "oracles.hpp"
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

TEST_CASE("success probability closed form") {
  CHECK(success_probability(cfg(0.5, 1, 1)) == 0.5);
  CHECK(success_probability(cfg(1.0, 1, 10)) == 1.0);
  CHECK(success_probability(cfg(0.4, 3, 10)) == doctest::Approx(std::pow(1.0 - 0.216, 10)).epsilon(1e-14));
  CHECK(success_probability(cfg(0.4, 3, 10)) == doctest::Approx(0.0879).epsilon(1e-3));
  CHECK(success_probability(cfg(0.3, std::nullopt, 10)) == 1.0);
}

TEST_CASE("success probability matches simulated delivery") {
  const auto c = cfg(0.4, 3, 10);
  const double ps = success_probability(c);
  const double trials = 1e6;
  const auto stats = monte_carlo(c, static_cast<std::uint64_t>(trials), 11);
  CHECK(std::abs(stats.delivery_rate - ps) <= 4.0 * oracle::binomial_sigma(ps, trials));
}

TEST_CASE("success probability is monotone on a grid") {
  for (int n = 1; n <= 12; ++n) {
    for (int l = 1; l <= 8; ++l) {
      for (int i = 1; i <= 20; ++i) {
        const double p = 0.05 * i;
        const double here = success_probability(cfg(p, l, n));
        if (i < 20) CHECK(success_probability(cfg(p + 0.05, l, n)) >= here);
        CHECK(success_probability(cfg(p, l + 1, n)) >= here);
        CHECK(success_probability(cfg(p, l, n + 1)) <= here);
      }
    }
  }
}

TEST_CASE("expected counts closed form") {
  const auto one = expected_counts(cfg(0.5, 1, 1));
  CHECK(one.tx == 1.0);
  CHECK(one.rx == 0.5);
  CHECK(one.sw == 2.0);

  const auto unbounded = expected_counts(cfg(0.5, std::nullopt, 10));
  CHECK(unbounded.tx == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(unbounded.rx == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(unbounded.sw == doctest::Approx(40.0).epsilon(1e-14));

  const auto perfect = expected_counts(cfg(1.0, 3, 10));
  CHECK(perfect.tx == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(perfect.rx == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("expected counts agree with explicit summation") {
  for (double p : {0.1, 0.4, 0.6, 0.95}) {
    for (int l = 1; l <= 10; ++l) {
      for (int n : {1, 5, 10}) {
        const auto e = expected_counts(cfg(p, l, n));
        CHECK(e.tx == doctest::Approx(oracle::expected_tx_by_summation(p, l, n)).epsilon(1e-12));
        CHECK(e.rx == doctest::Approx(p * e.tx).epsilon(1e-12));
        CHECK(e.sw == 2.0 * e.tx);
      }
    }
  }
  // A very large cap approaches the unbounded closed form.
  CHECK(oracle::expected_tx_by_summation(0.5, 200, 10) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("expected transmissions match Monte Carlo") {
  const auto c = cfg(0.6, 3, 10);
  const auto e = expected_counts(c);
  CHECK(e.tx == doctest::Approx(11.8).epsilon(0.01));
  const double trials = 1e6;
  const auto s = monte_carlo(c, static_cast<std::uint64_t>(trials), 5);
  CHECK(std::abs(s.mean_tx - e.tx) <= 4.0 * std::sqrt(s.var_tx / trials));
  CHECK(std::abs(s.mean_rx - e.rx) <= 4.0 * std::sqrt(s.var_rx / trials));
}

TEST_CASE("receptions are p times transmissions") {
  const auto s = monte_carlo(cfg(0.5, 2, 10), 1000000, 3);
  CHECK(s.mean_rx / s.mean_tx == doctest::Approx(0.5).epsilon(0.01));
  CHECK(s.mean_sw == 2.0 * s.mean_tx);
  CHECK(s.mean_rx <= s.mean_tx);
  CHECK(s.delivery_rate >= 0.0);
  CHECK(s.delivery_rate <= 1.0);
}

TEST_CASE("single packet accounting") {
  CounterStream stream(1, 0);
  const auto perfect = simulate_packet(cfg(1.0, 1, 10), stream);
  CHECK(perfect.delivered);
  CHECK(perfect.tx_count == 10);
  CHECK(perfect.rx_count == 10);
  CHECK(perfect.sw_count == 20);
  CHECK(perfect.ack_count == 0);

  // A negligible p fails the first hop on its single attempt.
  const auto dead = simulate_packet(cfg(1e-15, 1, 5), stream);
  CHECK_FALSE(dead.delivered);
  CHECK(dead.tx_count == 1);
  CHECK(dead.rx_count == 0);
  CHECK(dead.per_hop_tx == std::vector<int>{1, 0, 0, 0, 0});

  auto with_acks = cfg(1.0, 1, 4);
  with_acks.count_acks = true;
  CHECK(simulate_packet(with_acks, stream).ack_count == 4);
}

TEST_CASE("per-hop attempts respect the cap and stop after a failure") {
  const auto c = cfg(0.3, 3, 10);
  for (std::uint64_t t = 0; t < 2000; ++t) {
    CounterStream stream(9, t);
    const auto o = simulate_packet(c, stream);
    REQUIRE(o.per_hop_tx.size() == 10);
    std::int64_t sum = 0;
    bool failed = false;
    for (int k : o.per_hop_tx) {
      CHECK(k >= 0);
      CHECK(k <= 3);
      if (failed) CHECK(k == 0);
      if (k == 0) failed = true;
      sum += k;
    }
    CHECK(sum == o.tx_count);
    CHECK(o.sw_count == 2 * o.tx_count);
    CHECK(o.rx_count <= o.tx_count);
  }
}

TEST_CASE("Monte Carlo is deterministic across thread counts") {
  const auto c = cfg(0.45, 4, 10);
  const auto a = monte_carlo(c, 50000, 42, 1);
  const auto b = monte_carlo(c, 50000, 42, 7);
  const auto again = monte_carlo(c, 50000, 42, 7);
  CHECK(a.delivered == b.delivered);
  CHECK(a.mean_tx == b.mean_tx);
  CHECK(a.var_tx == b.var_tx);
  CHECK(a.cov_tx_rx == b.cov_tx_rx);
  CHECK(b.mean_rx == again.mean_rx);
  CHECK(monte_carlo(c, 50000, 43, 1).mean_tx != a.mean_tx);
  CHECK(a.seed == 42);
  CHECK(a.trials == 50000);
}

TEST_CASE("config validation") {
  CHECK(code_of([] { cfg(1.5, 1, 1).validate(); }) == ErrorCode::kInvalidProbability);
  CHECK(code_of([] { cfg(-0.1, 1, 1).validate(); }) == ErrorCode::kInvalidProbability);
  CHECK(code_of([] { cfg(0.5, 0, 1).validate(); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { cfg(0.5, 1, 0).validate(); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { monte_carlo(cfg(0.5, 1, 1), 0, 1); }) == ErrorCode::kInvalidArgument);
}
