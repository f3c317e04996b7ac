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

#include "doctest.h"
#include "hopfilter/conic.hpp"

#include <random>
#include <unsupported/Eigen/KroneckerProduct>

using hopfilter::conic::ConicProblem;
using hopfilter::conic::LmiConstraint;
using hopfilter::conic::Sense;
using hopfilter::conic::SolveStatus;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("scalar Schur complement bound") {
  ConicProblem prob;
  const int g = prob.add_scalar("gamma");
  LmiConstraint c;
  c.constant = mat({{0, 1}, {1, 1}});
  c.terms.push_back({prob.block(g).offset, mat({{1, 0}, {0, 0}})});
  prob.add_constraint(c);
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(1);
  obj(0) = 1.0;
  prob.set_objective(obj);
  const auto res = hopfilter::conic::solve(prob);
  REQUIRE(res.status == SolveStatus::kOptimal);
  CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("largest eigenvalue as an SDP") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd a(5, 5);
    for (int i = 0; i < 25; ++i) a(i / 5, i % 5) = nd(rng);
    const Eigen::MatrixXd c = 0.5 * (a + a.transpose());
    ConicProblem prob;
    prob.add_scalar("t");
    LmiConstraint con;
    con.constant = -c;
    con.terms.push_back({0, Eigen::MatrixXd::Identity(5, 5)});
    prob.add_constraint(con);
    prob.set_objective(Eigen::VectorXd::Ones(1));
    const auto res = hopfilter::conic::solve(prob);
    REQUIRE(res.status == SolveStatus::kOptimal);
    const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues().maxCoeff();
    CHECK(res.objective == doctest::Approx(lmax).epsilon(1e-8));
  }
}

TEST_CASE("minimal Lyapunov certificate matches the Kronecker solution") {
  const Eigen::MatrixXd a = mat({{0.5, 0.3, 0.0}, {-0.2, 0.7, 0.1}, {0.0, 0.4, -0.3}});
  const int n = 3;
  ConicProblem prob;
  const int p = prob.add_symmetric("P", n);
  // P - A'PA - I >= 0, minimize trace(P).
  LmiConstraint con;
  con.constant = -Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(prob.num_variables());
  for (int k = 0; k < prob.num_variables(); ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(prob.num_variables());
    e(k) = 1.0;
    const Eigen::MatrixXd basis = prob.unpack(p, e);
    con.terms.push_back({k, basis - a.transpose() * basis * a});
    obj(k) = basis.trace();
  }
  prob.add_constraint(con);
  prob.set_objective(obj);
  const auto res = hopfilter::conic::solve(prob);
  REQUIRE(res.status == SolveStatus::kOptimal);

  const Eigen::MatrixXd kron = Eigen::MatrixXd::Identity(n * n, n * n) -
                               Eigen::kroneckerProduct(a.transpose(), a.transpose()).eval();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd vec_p = kron.lu().solve(Eigen::VectorXd::Map(eye.data(), n * n));
  const Eigen::MatrixXd p_ref = Eigen::MatrixXd::Map(vec_p.data(), n, n);
  CHECK(res.objective == doctest::Approx(p_ref.trace()).epsilon(1e-7));
  CHECK((prob.unpack(p, res.y) - p_ref).norm() < 1e-5 * p_ref.norm());
}

TEST_CASE("contradictory constraints are infeasible") {
  ConicProblem prob;
  prob.add_scalar("y");
  LmiConstraint c;
  c.constant = mat({{0, 0}, {0, -1}});
  c.terms.push_back({0, mat({{1, 0}, {0, -1}})});
  prob.add_constraint(c);
  prob.set_objective(Eigen::VectorXd::Ones(1));
  prob.set_epsilon(1e-6);
  CHECK(hopfilter::conic::solve(prob).status == SolveStatus::kInfeasible);
}

TEST_CASE("fixed variables are substituted") {
  ConicProblem prob;
  prob.add_scalar("a");
  prob.add_scalar("b");
  LmiConstraint c;
  c.constant = mat({{0, 1}, {1, 0}});
  c.terms.push_back({0, mat({{1, 0}, {0, 0}})});
  c.terms.push_back({1, mat({{0, 0}, {0, 1}})});
  prob.add_constraint(c);
  Eigen::VectorXd obj(2);
  obj << 1.0, 0.0;
  prob.set_objective(obj);
  prob.fix_variable(1, 4.0);
  const auto res = hopfilter::conic::solve(prob);
  REQUIRE(res.status == SolveStatus::kOptimal);
  CHECK(res.y(1) == 4.0);
  CHECK(res.objective == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("svec packing round-trips symmetric blocks") {
  ConicProblem prob;
  const int s = prob.add_symmetric("S", 4);
  const int f = prob.add_full("F", 3, 2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd a(4, 4);
    for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = u(rng);
    a = (a + a.transpose()).eval();
    Eigen::MatrixXd b(3, 2);
    for (int i = 0; i < 6; ++i) b(i % 3, i / 3) = u(rng);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(prob.num_variables());
    prob.pack(s, a, y);
    prob.pack(f, b, y);
    CHECK((prob.unpack(s, y) - a).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(prob.unpack(f, y) == b);
    // svec is an isometry for the trace inner product.
    CHECK(y.segment(prob.block(s).offset, prob.block(s).size()).squaredNorm() ==
          doctest::Approx((a.array() * a.array()).sum()).epsilon(1e-14));
  }
}
