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

// Discrete-time Markov jump linear systems
//
//   x(k+1) = A(t) x(k) + J(t) w(k)
//   y(k)   = Cy(t) x(k) + Ey(t) w(k)
//   z(k)   = Cz(t) x(k) + Ez(t) w(k)
//
// with the mode t = theta_k driven by a Markov chain, plus the packet-loss
// construction used throughout the library and time-domain simulation of the
// plant in closed loop with a cluster-dependent Luenberger filter.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace hopfilter {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kStructuralTolerance = 1e-12;

struct Dimensions {
  int n = 0;  // state
  int m = 0;  // disturbance
  int q = 0;  // measured output
  int r = 0;  // estimated output

  bool operator==(const Dimensions&) const = default;
};

struct ModeMatrices {
  Matrix a, j, cy, ey, cz, ez;

  Dimensions dims() const {
    return {static_cast<int>(a.rows()), static_cast<int>(j.cols()), static_cast<int>(cy.rows()),
            static_cast<int>(cz.rows())};
  }
  // Throws DimensionMismatch / InvalidArgument (non-finite entries).
  void validate() const;
};

class MarkovChain {
 public:
  // Throws NonStochastic unless every row is a probability vector (1e-12).
  explicit MarkovChain(Matrix transition);

  const Matrix& transition() const { return p_; }
  int num_modes() const { return static_cast<int>(p_.rows()); }
  bool is_bernoulli() const { return bernoulli_; }
  // Common row of a Bernoulli chain (first row otherwise).
  Vector row(int i = 0) const { return p_.row(i).transpose(); }

 private:
  Matrix p_;
  bool bernoulli_ = false;
};

// Generalized Bernoulli chain: every row equals probs.
MarkovChain bernoulli_chain(std::span<const double> probs);

class ClusterMap {
 public:
  // assignment[i] is the cluster of mode i; clusters must be 0..Nc-1, all used.
  explicit ClusterMap(std::vector<int> assignment);

  static ClusterMap per_mode(int num_modes);
  static ClusterMap single(int num_modes);

  int cluster_of(int mode) const { return assignment_.at(mode); }
  int num_clusters() const { return num_clusters_; }
  int num_modes() const { return static_cast<int>(assignment_.size()); }
  std::vector<int> members(int cluster) const;
  const std::vector<int>& assignment() const { return assignment_; }

 private:
  std::vector<int> assignment_;
  int num_clusters_ = 0;
};

class MjlsModel {
 public:
  MjlsModel(std::vector<ModeMatrices> modes, MarkovChain chain, ClusterMap clusters);

  const std::vector<ModeMatrices>& modes() const { return modes_; }
  const ModeMatrices& mode(int i) const { return modes_.at(i); }
  const MarkovChain& chain() const { return chain_; }
  const ClusterMap& clusters() const { return clusters_; }
  Dimensions dims() const { return modes_.front().dims(); }
  int num_modes() const { return static_cast<int>(modes_.size()); }

  // A, Cy and Cz agree across the members of every cluster (1e-12).
  bool theorem1_ready() const;
  // Matrices of the first member of a cluster.
  const ModeMatrices& cluster_representative(int cluster) const;

 private:
  std::vector<ModeMatrices> modes_;
  MarkovChain chain_;
  ClusterMap clusters_;
};

struct LtiPlant {
  ModeMatrices matrices;
  double ts = 0.0;  // sample period [s]

  void validate() const;
};

MjlsModel single_mode_model(const LtiPlant& plant);

// Two modes: 0 = packet received (the plant), 1 = packet lost (Cy = 0,
// Ey = 0). Bernoulli chain [ps, 1 - ps], one cluster per mode.
MjlsModel build_loss_model(const LtiPlant& plant, double ps);

using ModeSequence = std::vector<int>;

// Initial mode from the Bernoulli row (uniform for non-Bernoulli chains),
// then transitions from the current row. Deterministic in (chain, horizon, seed).
ModeSequence sample_mode_sequence(const MarkovChain& chain, int horizon, std::uint64_t seed);

// Gains of the cluster-dependent filter
//   xf(k+1) = A_l xf(k) + Bf_l (y(k) - Cy_l xf(k))
//   zf(k)   = Cz_l xf(k) + Df_l (y(k) - Cy_l xf(k))
struct FilterGains {
  struct Cluster {
    Matrix a, cy, cz;  // copied from the model
    Matrix bf, df;
  };
  std::vector<Cluster> clusters;

  int num_clusters() const { return static_cast<int>(clusters.size()); }
};

// Builds gains for a model from per-cluster Bf, Df.
FilterGains make_gains(const MjlsModel& model, std::span<const Matrix> bf, std::span<const Matrix> df);

struct Trajectory {
  ModeSequence modes;
  std::vector<Vector> w, x, xf, y, z, zf, e;

  double disturbance_energy() const;
  double error_energy() const;
};

Trajectory simulate_filtered(const MjlsModel& model, const FilterGains& gains, const ModeSequence& modes,
                             std::span<const Vector> w, const Vector& x0, const Vector& xf0);

// max over trajectories of sum|e|^2 / sum|w|^2.
double empirical_l2_gain(std::span<const Trajectory> trajectories);

// Zero-order hold of dx/dt = Ac x + Bc u at period ts: (Ad, Bd).
std::pair<Matrix, Matrix> zoh_discretize(const Matrix& ac, const Matrix& bc, double ts);

// Continuous-time linearized rotary inverted pendulum the fixture is built
// from. States: arm angle, pendulum angle, and their rates. Input: motor
// voltage. Disturbances: w0 = input voltage disturbance (scaled by
// input_noise), w1 = encoder noise (scaled by sensor_noise).
struct PendulumParameters {
  Matrix ac;  // 4x4
  Matrix bc;  // 4x1
  double input_noise = 0.0;
  double sensor_noise = 0.0;
  double ts = 0.0;
};

PendulumParameters pendulum_parameters();
// Builds the discrete plant from parameters via zoh_discretize.
LtiPlant discretize_pendulum(const PendulumParameters& params);
// Frozen result of discretize_pendulum(pendulum_parameters()).
LtiPlant fixture_pendulum();

}  // namespace hopfilter
