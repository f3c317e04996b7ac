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

// Reference computations that share no code with the library.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

// max over a uniform grid of w in [0, pi] of sigma_max(C (zI - A)^-1 B + D).
inline double hinf_frequency_sweep(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& c,
                                   const Eigen::MatrixXd& d, int points = 10000) {
  using Cx = Eigen::MatrixXcd;
  const Eigen::Index n = a.rows();
  double worst = 0.0;
  for (int k = 0; k <= points; ++k) {
    const double w = std::numbers::pi * k / points;
    const std::complex<double> z = std::polar(1.0, w);
    Cx m = z * Cx::Identity(n, n) - a.cast<std::complex<double>>();
    Cx t = c.cast<std::complex<double>>() * m.partialPivLu().solve(b.cast<std::complex<double>>()) +
           d.cast<std::complex<double>>();
    worst = std::max(worst, Eigen::JacobiSVD<Cx>(t).singularValues()(0));
  }
  return worst;
}

// Error system of a single-mode plant with a Luenberger filter (Bf, Df):
//   e~(k+1) = (A - Bf Cy) e~ + (J - Bf Ey) w,  e = (Cz - Df Cy) e~ + (Ez - Df Ey) w.
inline double filter_error_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& j, const Eigen::MatrixXd& cy,
                                const Eigen::MatrixXd& ey, const Eigen::MatrixXd& cz, const Eigen::MatrixXd& ez,
                                const Eigen::MatrixXd& bf, const Eigen::MatrixXd& df, int points = 10000) {
  return hinf_frequency_sweep(a - bf * cy, j - bf * ey, cz - df * cy, ez - df * ey, points);
}

// Expected transmissions for one packet by explicit summation over the
// truncated geometric attempt distribution, hop by hop.
inline double expected_tx_by_summation(double p, int cap, int hops) {
  double per_hop = 0.0;   // E[attempts on a reached hop]
  double success = 0.0;   // P(hop delivers within cap)
  for (int k = 1; k <= cap; ++k) {
    const double first_success_at_k = std::pow(1.0 - p, k - 1) * p;
    per_hop += k * first_success_at_k;
    success += first_success_at_k;
  }
  per_hop += cap * (1.0 - success);  // all attempts failed
  double total = 0.0;
  double reach = 1.0;
  for (int h = 0; h < hops; ++h) {
    total += reach * per_hop;
    reach *= success;
  }
  return total;
}

inline double binomial_sigma(double prob, double trials) { return std::sqrt(prob * (1.0 - prob) / trials); }

}  // namespace oracle
