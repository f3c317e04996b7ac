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

// H-infinity filter synthesis for Markov jump linear systems with a
// generalized Bernoulli chain and cluster-dependent filters.
//
// For every mode i with p_i > 0 in cluster l the program requires
//
//   [ H_i                                          *    *   * ]
//   [ 0                       gamma*I              *    *   * ]  >  0
//   [ X A_l + F_l Cy_l        X J_i + F_l Ey_i     X    *   * ]
//   [ Cz_l - K_l Cy_l         Ez_i - K_l Ey_i      0    I     ]
//
// together with  sum_j p_j H_j - X < 0,  and minimizes gamma, which bounds
// the SQUARED H-infinity norm of the estimation error. The gains are
// Bf_l = -X^{-1} F_l and Df_l = K_l.

#include <optional>
#include <string>
#include <vector>

#include "hopfilter/conic.hpp"
#include "hopfilter/mjls.hpp"

namespace hopfilter {

struct SynthesisOptions {
  // Strictness margin; defaults to default_epsilon(model).
  std::optional<double> epsilon;
  conic::SolverOptions solver;
  // Largest accepted condition number of X before gain recovery.
  double max_condition = 1e10;
};

// 1e-7 * (1 + max_i max|A_i|).
double default_epsilon(const MjlsModel& model);

// Indexes into the conic problem produced by assemble_theorem1. Entries are
// -1 where the variable does not exist: H for modes with zero probability,
// F and K for clusters whose measurement channel is identically zero (and for
// every cluster when the gains are fixed).
struct Theorem1Layout {
  int gamma = -1;
  int x = -1;
  std::vector<int> h;
  std::vector<int> f;
  std::vector<int> k;
  // Modes with p_i > 0, in order; one per-mode constraint each, followed by
  // the coupling constraint.
  std::vector<int> active_modes;
};

struct Theorem1Problem {
  conic::ConicProblem problem;
  Theorem1Layout layout;
};

// Throws NotTheorem1Ready or NonBernoulliChain.
Theorem1Problem assemble_theorem1(const MjlsModel& model, double epsilon);

// Same program with F_l = -X Bf_l and K_l = Df_l substituted; the remaining
// variables are H_i, X and gamma.
Theorem1Problem assemble_fixed_filter(const MjlsModel& model, const FilterGains& gains, double epsilon);

struct Certificates {
  std::vector<Matrix> h;  // empty matrix for modes with zero probability
  Matrix x;
  std::vector<Matrix> f;
  std::vector<Matrix> k;
};

struct SynthesisResult {
  FilterGains gains;
  double gamma = 0.0;      // bound on the squared norm
  double hinf_norm = 0.0;  // sqrt(gamma)
  Certificates certificates;
  std::vector<int> active_modes;
  std::string status;
  double margin = 0.0;
  double epsilon = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
};

// Errors: NotTheorem1Ready, NonBernoulliChain, Infeasible, SolverFailure,
// IllConditioned.
SynthesisResult synthesize(const MjlsModel& model, const SynthesisOptions& options = {});

// Least certified squared-norm bound for the given gains. Throws Infeasible
// when the filter is not mean-square stabilizing at this loss level.
double analyze_fixed_filter(const MjlsModel& model, const FilterGains& gains, const SynthesisOptions& options = {});

// Whether the synthesis LMIs admit a strictly feasible point with gamma fixed.
bool feasible_at_gamma(const MjlsModel& model, double gamma, const SynthesisOptions& options = {});

struct CertificateReport {
  double epsilon = 0.0;
  std::vector<int> modes;               // mode of each per-mode entry
  std::vector<double> mode_min_eigen;   // must be >= epsilon/2
  double coupling_max_eigen = 0.0;      // must be <= -epsilon/2
  double x_min_eigen = 0.0;
  bool pass = false;
};

// Rebuilds every LMI directly from the returned matrices.
CertificateReport check_certificate(const MjlsModel& model, const SynthesisResult& result, double epsilon);

}  // namespace hopfilter
