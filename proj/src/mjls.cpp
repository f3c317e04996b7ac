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

#include "hopfilter/mjls.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#include "hopfilter/error.hpp"
#include "hopfilter/rng.hpp"

namespace hopfilter {

namespace {

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(name) + " is " + std::to_string(m.rows()) + "x" +
                                                   std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                                                   "x" + std::to_string(cols));
  }
}

bool nearly_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.size() == 0 || (a - b).cwiseAbs().maxCoeff() <= kStructuralTolerance);
}

}  // namespace

void ModeMatrices::validate() const {
  const Dimensions d = dims();
  require_shape(a, d.n, d.n, "A");
  require_shape(j, d.n, d.m, "J");
  require_shape(cy, d.q, d.n, "Cy");
  require_shape(ey, d.q, d.m, "Ey");
  require_shape(cz, d.r, d.n, "Cz");
  require_shape(ez, d.r, d.m, "Ez");
  for (const Matrix* mat : {&a, &j, &cy, &ey, &cz, &ez}) {
    if (!mat->allFinite()) throw Error(ErrorCode::kInvalidArgument, "mode matrix has non-finite entries");
  }
}

MarkovChain::MarkovChain(Matrix transition) : p_(std::move(transition)) {
  if (p_.rows() == 0 || p_.rows() != p_.cols()) {
    throw Error(ErrorCode::kNonStochastic, "transition matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < p_.rows(); ++i) {
    if (!p_.row(i).allFinite() || (p_.row(i).array() < 0.0).any() || (p_.row(i).array() > 1.0).any()) {
      throw Error(ErrorCode::kNonStochastic, "row " + std::to_string(i) + " has entries outside [0, 1]");
    }
    if (std::abs(p_.row(i).sum() - 1.0) > kStructuralTolerance) {
      throw Error(ErrorCode::kNonStochastic, "row " + std::to_string(i) + " does not sum to 1");
    }
  }
  bernoulli_ = true;
  for (Eigen::Index i = 1; i < p_.rows(); ++i) {
    if ((p_.row(i) - p_.row(0)).cwiseAbs().maxCoeff() > kStructuralTolerance) bernoulli_ = false;
  }
}

MarkovChain bernoulli_chain(std::span<const double> probs) {
  if (probs.empty()) throw Error(ErrorCode::kNonStochastic, "empty probability vector");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw Error(ErrorCode::kNonStochastic, "negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::kNonStochastic, "probabilities sum to " + std::to_string(sum));
  const auto n = static_cast<Eigen::Index>(probs.size());
  Matrix p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p.col(j).setConstant(probs[j] / sum);
  return MarkovChain(std::move(p));
}

ClusterMap::ClusterMap(std::vector<int> assignment) : assignment_(std::move(assignment)) {
  if (assignment_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty cluster assignment");
  const int top = *std::max_element(assignment_.begin(), assignment_.end());
  if (*std::min_element(assignment_.begin(), assignment_.end()) < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative cluster index");
  }
  num_clusters_ = top + 1;
  for (int c = 0; c < num_clusters_; ++c) {
    if (std::find(assignment_.begin(), assignment_.end(), c) == assignment_.end()) {
      throw Error(ErrorCode::kInvalidArgument, "cluster " + std::to_string(c) + " is empty");
    }
  }
}

ClusterMap ClusterMap::per_mode(int num_modes) {
  std::vector<int> a(num_modes);
  for (int i = 0; i < num_modes; ++i) a[i] = i;
  return ClusterMap(std::move(a));
}

ClusterMap ClusterMap::single(int num_modes) { return ClusterMap(std::vector<int>(num_modes, 0)); }

std::vector<int> ClusterMap::members(int cluster) const {
  std::vector<int> out;
  for (int i = 0; i < num_modes(); ++i) {
    if (assignment_[i] == cluster) out.push_back(i);
  }
  return out;
}

MjlsModel::MjlsModel(std::vector<ModeMatrices> modes, MarkovChain chain, ClusterMap clusters)
    : modes_(std::move(modes)), chain_(std::move(chain)), clusters_(std::move(clusters)) {
  if (modes_.empty()) throw Error(ErrorCode::kInvalidArgument, "model has no modes");
  if (chain_.num_modes() != num_modes() || clusters_.num_modes() != num_modes()) {
    throw Error(ErrorCode::kDimensionMismatch, "chain/cluster size does not match mode count");
  }
  const Dimensions d = modes_.front().dims();
  for (const auto& m : modes_) {
    m.validate();
    if (!(m.dims() == d)) throw Error(ErrorCode::kDimensionMismatch, "modes have different dimensions");
  }
}

bool MjlsModel::theorem1_ready() const {
  for (int c = 0; c < clusters_.num_clusters(); ++c) {
    const ModeMatrices& ref = cluster_representative(c);
    for (int i : clusters_.members(c)) {
      const ModeMatrices& m = modes_[i];
      if (!nearly_equal(m.a, ref.a) || !nearly_equal(m.cy, ref.cy) || !nearly_equal(m.cz, ref.cz)) return false;
    }
  }
  return true;
}

const ModeMatrices& MjlsModel::cluster_representative(int cluster) const {
  return modes_.at(clusters_.members(cluster).front());
}

void LtiPlant::validate() const {
  matrices.validate();
  if (!(ts > 0.0) || !std::isfinite(ts)) throw Error(ErrorCode::kInvalidArgument, "sample period must be positive");
}

MjlsModel single_mode_model(const LtiPlant& plant) {
  plant.validate();
  const double one[] = {1.0};
  return MjlsModel({plant.matrices}, bernoulli_chain(one), ClusterMap::per_mode(1));
}

MjlsModel build_loss_model(const LtiPlant& plant, double ps) {
  if (!(ps >= 0.0 && ps <= 1.0)) {
    throw Error(ErrorCode::kInvalidProbability, "success probability " + std::to_string(ps) + " outside [0, 1]");
  }
  plant.validate();
  ModeMatrices lost = plant.matrices;
  lost.cy.setZero();
  lost.ey.setZero();
  const double probs[] = {ps, 1.0 - ps};
  return MjlsModel({plant.matrices, lost}, bernoulli_chain(probs), ClusterMap::per_mode(2));
}

ModeSequence sample_mode_sequence(const MarkovChain& chain, int horizon, std::uint64_t seed) {
  if (horizon < 1) throw Error(ErrorCode::kInvalidArgument, "horizon must be at least 1");
  CounterStream stream(seed, 0);
  const int n = chain.num_modes();
  auto draw = [&](const Vector& row) {
    const double u = stream.next_double();
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += row(j);
      if (u < acc) return j;
    }
    // u landed in the rounding gap above the last cumulative sum.
    for (int j = n - 1; j >= 0; --j) {
      if (row(j) > 0.0) return j;
    }
    return n - 1;
  };
  ModeSequence seq(horizon);
  seq[0] = chain.is_bernoulli() ? draw(chain.row(0)) : draw(Vector::Constant(n, 1.0 / n));
  for (int k = 1; k < horizon; ++k) seq[k] = draw(chain.row(seq[k - 1]));
  return seq;
}

FilterGains make_gains(const MjlsModel& model, std::span<const Matrix> bf, std::span<const Matrix> df) {
  const int nc = model.clusters().num_clusters();
  if (static_cast<int>(bf.size()) != nc || static_cast<int>(df.size()) != nc) {
    throw Error(ErrorCode::kDimensionMismatch, "gain count does not match cluster count");
  }
  const Dimensions d = model.dims();
  FilterGains g;
  for (int c = 0; c < nc; ++c) {
    const ModeMatrices& rep = model.cluster_representative(c);
    require_shape(bf[c], d.n, d.q, "Bf");
    require_shape(df[c], d.r, d.q, "Df");
    g.clusters.push_back({rep.a, rep.cy, rep.cz, bf[c], df[c]});
  }
  return g;
}

double Trajectory::disturbance_energy() const {
  double s = 0.0;
  for (const auto& v : w) s += v.squaredNorm();
  return s;
}

double Trajectory::error_energy() const {
  double s = 0.0;
  for (const auto& v : e) s += v.squaredNorm();
  return s;
}

Trajectory simulate_filtered(const MjlsModel& model, const FilterGains& gains, const ModeSequence& modes,
                             std::span<const Vector> w, const Vector& x0, const Vector& xf0) {
  const Dimensions d = model.dims();
  if (gains.num_clusters() != model.clusters().num_clusters()) {
    throw Error(ErrorCode::kDimensionMismatch, "gain cluster count does not match the model");
  }
  if (modes.size() != w.size()) throw Error(ErrorCode::kDimensionMismatch, "mode and disturbance lengths differ");
  if (x0.size() != d.n || xf0.size() != d.n) throw Error(ErrorCode::kDimensionMismatch, "initial state size");
  for (const auto& c : gains.clusters) {
    require_shape(c.bf, d.n, d.q, "Bf");
    require_shape(c.df, d.r, d.q, "Df");
  }

  Trajectory t;
  t.modes = modes;
  t.w.assign(w.begin(), w.end());
  Vector x = x0;
  Vector xf = xf0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const int mode = modes[k];
    if (mode < 0 || mode >= model.num_modes()) throw Error(ErrorCode::kDimensionMismatch, "mode index out of range");
    if (w[k].size() != d.m) throw Error(ErrorCode::kDimensionMismatch, "disturbance sample size");
    const ModeMatrices& m = model.mode(mode);
    const FilterGains::Cluster& g = gains.clusters[model.clusters().cluster_of(mode)];

    const Vector y = m.cy * x + m.ey * w[k];
    const Vector z = m.cz * x + m.ez * w[k];
    const Vector innovation = y - g.cy * xf;
    const Vector zf = g.cz * xf + g.df * innovation;
    t.x.push_back(x);
    t.xf.push_back(xf);
    t.y.push_back(y);
    t.z.push_back(z);
    t.zf.push_back(zf);
    t.e.push_back(z - zf);
    x = m.a * x + m.j * w[k];
    xf = g.a * xf + g.bf * innovation;
  }
  return t;
}

double empirical_l2_gain(std::span<const Trajectory> trajectories) {
  double worst = 0.0;
  for (const auto& t : trajectories) {
    const double ew = t.disturbance_energy();
    if (!(ew > 0.0)) throw Error(ErrorCode::kZeroDisturbance, "trajectory has zero disturbance energy");
    worst = std::max(worst, t.error_energy() / ew);
  }
  return worst;
}

std::pair<Matrix, Matrix> zoh_discretize(const Matrix& ac, const Matrix& bc, double ts) {
  const Eigen::Index n = ac.rows();
  const Eigen::Index m = bc.cols();
  require_shape(ac, n, n, "Ac");
  require_shape(bc, n, m, "Bc");
  if (!(ts > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sample period must be positive");
  Matrix aug = Matrix::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = ac * ts;
  aug.topRightCorner(n, m) = bc * ts;
  const Matrix e = aug.exp();
  return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

PendulumParameters pendulum_parameters() {
  PendulumParameters p;
  p.ac.resize(4, 4);
  p.ac << 0.0, 0.0, 1.0, 0.0,
          0.0, 0.0, 0.0, 1.0,
          0.0, 81.4, -45.8, -0.93,
          0.0, 122.0, -44.1, -1.4;
  p.bc.resize(4, 1);
  p.bc << 0.0, 0.0, 83.4, 80.3;
  p.input_noise = 0.1;
  p.sensor_noise = 0.03;
  p.ts = 0.05;
  return p;
}

LtiPlant discretize_pendulum(const PendulumParameters& params) {
  const auto [ad, bd] = zoh_discretize(params.ac, params.bc, params.ts);
  LtiPlant plant;
  plant.ts = params.ts;
  ModeMatrices& m = plant.matrices;
  m.a = ad;
  m.j = Matrix::Zero(4, 2);
  m.j.col(0) = bd * params.input_noise;
  m.cy = Matrix::Zero(1, 4);
  m.cy(0, 0) = 1.0;
  m.ey = Matrix::Zero(1, 2);
  m.ey(0, 1) = params.sensor_noise;
  m.cz = Matrix::Zero(2, 4);
  m.cz(0, 0) = 1.0;
  m.cz(1, 1) = 1.0;
  m.ez = Matrix::Zero(2, 2);
  return plant;
}

LtiPlant fixture_pendulum() {
  // discretize_pendulum(pendulum_parameters()), printed with %.17g.
  LtiPlant plant;
  plant.ts = 0.05;
  ModeMatrices& m = plant.matrices;
  m.a.resize(4, 4);
  m.a << 0.99999999999999978, 0.054272242585521921, 0.019520294463672927, 0.00042221506024171785,
         0.0, 1.1069117138991567, -0.029399552587839294, 0.050681872094530234,
         0.0, 1.6404622066924661, 0.087350829407120065, 0.035527267649967581,
         0.0, 3.7900648148825811, -0.88857105084574739, 1.0632986768735049;
  m.j.resize(4, 2);
  m.j << 0.0055502335789667234, 0.0,
         0.0053529957955894348, 0.0,
         0.16618964276077328, 0.0,
         0.16178316433649864, 0.0;
  m.cy = Matrix::Zero(1, 4);
  m.cy(0, 0) = 1.0;
  m.ey = Matrix::Zero(1, 2);
  m.ey(0, 1) = 0.03;
  m.cz = Matrix::Zero(2, 4);
  m.cz(0, 0) = 1.0;
  m.cz(1, 1) = 1.0;
  m.ez = Matrix::Zero(2, 2);
  return plant;
}

}  // namespace hopfilter
