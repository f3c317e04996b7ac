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

// Solver-agnostic LMI problem description and a dense primal-dual
// interior-point method for it.
//
// Decision variables are grouped into named blocks. A symmetric n x n block
// owns n(n+1)/2 scalars in svec order (column-major lower triangle) where an
// off-diagonal scalar s maps to entries (i,j) and (j,i) with value s/sqrt(2),
// so the basis is orthonormal under the trace inner product. A full block owns
// rows*cols scalars in column-major order.
//
// Each constraint is a symmetric matrix affine in the scalars,
//   M(y) = constant + sum_k y_k * coefficient_k,
// required to satisfy M(y) >= eps*I (kPositive) or M(y) <= -eps*I (kNegative).

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace hopfilter::conic {

enum class VariableKind { kSymmetric, kFull };

struct VariableBlock {
  std::string name;
  VariableKind kind = VariableKind::kFull;
  int rows = 0;
  int cols = 0;
  int offset = 0;

  int size() const { return kind == VariableKind::kSymmetric ? rows * (rows + 1) / 2 : rows * cols; }
};

enum class Sense { kPositive, kNegative };

struct LmiTerm {
  int variable = 0;
  Eigen::MatrixXd coefficient;
};

struct LmiConstraint {
  std::string name;
  Sense sense = Sense::kPositive;
  Eigen::MatrixXd constant;
  std::vector<LmiTerm> terms;

  int dim() const { return static_cast<int>(constant.rows()); }
  Eigen::MatrixXd evaluate(const Eigen::VectorXd& y) const;
};

class ConicProblem {
 public:
  int add_symmetric(std::string name, int n);
  int add_full(std::string name, int rows, int cols);
  int add_scalar(std::string name) { return add_full(std::move(name), 1, 1); }

  const std::vector<VariableBlock>& blocks() const { return blocks_; }
  const VariableBlock& block(int index) const { return blocks_.at(index); }
  int num_variables() const { return num_variables_; }

  // Matrix value of a block given the full scalar vector.
  Eigen::MatrixXd unpack(int block, const Eigen::VectorXd& y) const;
  // Writes a block value into the scalar vector (symmetric part only).
  void pack(int block, const Eigen::MatrixXd& value, Eigen::VectorXd& y) const;

  void add_constraint(LmiConstraint constraint);
  const std::vector<LmiConstraint>& constraints() const { return constraints_; }

  void set_objective(Eigen::VectorXd c) { objective_ = std::move(c); }
  const Eigen::VectorXd& objective() const { return objective_; }

  void set_epsilon(double eps) { epsilon_ = eps; }
  double epsilon() const { return epsilon_; }

  // Fixes one scalar to a value by an equality row; used for feasibility
  // probes at a prescribed objective level.
  void fix_variable(int variable, double value) { fixed_.push_back({variable, value}); }
  const std::vector<std::pair<int, double>>& fixed() const { return fixed_; }

 private:
  std::vector<VariableBlock> blocks_;
  std::vector<LmiConstraint> constraints_;
  std::vector<std::pair<int, double>> fixed_;
  Eigen::VectorXd objective_;
  double epsilon_ = 0.0;
  int num_variables_ = 0;
};

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 150;
  // Box |y_k| <= variable_bound keeps the feasible set compact.
  double variable_bound = 1e8;
  // Constraints are rescaled so their largest coefficient is at most this.
  double balance_limit = 1e3;
};

enum class SolveStatus { kOptimal, kInfeasible, kBoundReached, kFailure };

struct SolveResult {
  SolveStatus status = SolveStatus::kFailure;
  Eigen::VectorXd y;
  double objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
  // Smallest eigenvalue of (+/-)M(y) over all constraints, in original scale.
  double margin = 0.0;
  std::string message;
};

SolveResult solve(const ConicProblem& problem, const SolverOptions& options = {});

// Symmetry defect max|M - M^T| over all constant and coefficient matrices.
double symmetry_defect(const ConicProblem& problem);

}  // namespace hopfilter::conic
