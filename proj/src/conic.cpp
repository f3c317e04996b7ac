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

#include "hopfilter/conic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace hopfilter::conic {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// One semidefinite cone of the internal inequality form
//   F0 + sum_k y_k F_k >= 0.
struct Cone {
  Eigen::MatrixXd f0;
  std::vector<std::pair<int, Eigen::MatrixXd>> terms;
};

// minimize c'y  s.t.  every cone >= 0,  lp_b + lp_g * y >= 0.
struct InequalityForm {
  int num_variables = 0;
  Eigen::VectorXd c;
  std::vector<Cone> cones;
  Eigen::VectorXd lp_b;
  Eigen::MatrixXd lp_g;
};

struct IpmOutcome {
  bool converged = false;
  bool stopped_early = false;
  Eigen::VectorXd y;
  double pobj = 0.0;
  double dobj = 0.0;
  double rel_gap = 0.0;
  int iterations = 0;
  std::string message;
};

Eigen::MatrixXd cone_value(const Cone& cone, const Eigen::VectorXd& y) {
  Eigen::MatrixXd s = cone.f0;
  for (const auto& [k, f] : cone.terms) s += y(k) * f;
  return s;
}

// Value, gradient and Hessian of the barrier
//   phi(y) = tau * c'y - sum_b log det S_b(y) - sum_k log s_k(y).
struct BarrierEval {
  bool inside = false;
  double value = 0.0;
};

BarrierEval barrier_value(const InequalityForm& prob, const Eigen::VectorXd& y, double tau) {
  BarrierEval ev;
  double v = tau * prob.c.dot(y);
  const Eigen::VectorXd s_lp = prob.lp_b + prob.lp_g * y;
  if ((s_lp.array() <= 0.0).any()) return ev;
  v -= s_lp.array().log().sum();
  for (const auto& cone : prob.cones) {
    Eigen::LLT<Eigen::MatrixXd> chol(cone_value(cone, y));
    if (chol.info() != Eigen::Success) return ev;
    v -= 2.0 * chol.matrixLLT().diagonal().array().log().sum();
  }
  ev.inside = std::isfinite(v);
  ev.value = v;
  return ev;
}

double barrier_parameter(const InequalityForm& prob) {
  double nu = static_cast<double>(prob.lp_b.size());
  for (const auto& cone : prob.cones) nu += static_cast<double>(cone.f0.rows());
  return nu;
}

// Path-following on the log barrier from a strictly feasible y. On the
// central path the suboptimality is at most nu/tau, which serves as the
// duality-gap estimate. early_stop is checked after every Newton step.
IpmOutcome run_ipm(const InequalityForm& prob, Eigen::VectorXd y,
                   const std::function<bool(const Eigen::VectorXd&)>& early_stop, double tol,
                   int max_iterations) {
  const int nv = prob.num_variables;
  const double nu = barrier_parameter(prob);
  IpmOutcome out;
  out.y = y;

  double tau = nu / (1.0 + std::abs(prob.c.dot(y)));
  constexpr double kGrowth = 16.0;
  constexpr int kMaxNewton = 60;
  int newton_total = 0;

  // Newton breakdown close to the optimum (a cone nearly singular along the
  // whole optimal face) falls back to the last centered iterate when its
  // gap is already small.
  constexpr double kFallbackGap = 1e-6;
  IpmOutcome best;
  bool has_best = false;
  auto finish = [&](std::string message) {
    if (has_best && best.rel_gap < kFallbackGap) {
      best.converged = true;
      best.iterations = newton_total;
      best.message = "stopped at the last centered point: " + message;
      return best;
    }
    out.iterations = newton_total;
    out.message = std::move(message);
    return out;
  };

  for (int outer = 0; outer < max_iterations; ++outer) {
    if (!barrier_value(prob, y, tau).inside) {
      return finish("iterate left the feasible set");
    }
    bool centered = false;
    double last_decrement = std::numeric_limits<double>::infinity();
    for (int inner = 0; inner < kMaxNewton; ++inner) {
      ++newton_total;
      // The Newton system is the least-squares problem on the stacked
      // whitened terms G (cone blocks L^-1 F_a L^-T and LP rows g_i/s_i),
      // with Hessian G'G and gradient tau*c - G'e. Factoring G by QR avoids
      // squaring its condition number, which matters near the optimal face.
      const Eigen::VectorXd s_lp = prob.lp_b + prob.lp_g * y;
      Eigen::Index rows = s_lp.size();
      for (const auto& cone : prob.cones) rows += cone.f0.rows() * cone.f0.rows();
      Eigen::MatrixXd g_mat = Eigen::MatrixXd::Zero(rows, nv);
      Eigen::VectorXd e_vec(rows);
      g_mat.topRows(s_lp.size()) = s_lp.cwiseInverse().asDiagonal() * prob.lp_g;
      e_vec.head(s_lp.size()).setOnes();
      Eigen::Index row = s_lp.size();
      for (const auto& cone : prob.cones) {
        Eigen::LLT<Eigen::MatrixXd> chol(cone_value(cone, y));
        const Eigen::Index d = cone.f0.rows();
        for (const auto& [var, coeff] : cone.terms) {
          const Eigen::MatrixXd half = chol.matrixL().solve(coeff);
          const Eigen::MatrixXd w = chol.matrixL().solve(half.transpose());
          g_mat.block(row, var, d * d, 1) += Eigen::Map<const Eigen::VectorXd>(w.data(), d * d);
        }
        Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
        e_vec.segment(row, d * d) = Eigen::Map<const Eigen::VectorXd>(eye.data(), d * d);
        row += d * d;
      }
      const Eigen::VectorXd grad = tau * prob.c - g_mat.transpose() * e_vec;
      const Eigen::VectorXd scale = g_mat.colwise().norm().transpose().cwiseMax(1e-300).cwiseInverse();
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows, nv);
      qr.setThreshold(1e-300);
      qr.compute(g_mat * scale.asDiagonal());
      // Columns past the numerical rank get no step; the rest is the exact
      // Newton step restricted to the span of the leading pivoted columns.
      const Eigen::Index rank = qr.rank();
      if (rank == 0) return finish("barrier Hessian is singular");
      const auto r_mat = qr.matrixR().topLeftCorner(rank, rank).template triangularView<Eigen::Upper>();
      const Eigen::VectorXd pdc = qr.colsPermutation().transpose() * (scale.asDiagonal() * prob.c).eval();
      const Eigen::VectorXd v = r_mat.transpose().solve(pdc.head(rank));
      const Eigen::VectorXd qte = (qr.householderQ().transpose() * e_vec).head(rank);
      Eigen::VectorXd u = Eigen::VectorXd::Zero(nv);
      u.head(rank) = r_mat.solve((qte - tau * v).eval());
      const Eigen::VectorXd dy = scale.asDiagonal() * (qr.colsPermutation() * u);
      const double decrement = -grad.dot(dy);
      if (decrement < 0.0 || !std::isfinite(decrement)) {
        return finish("Newton direction is not a descent direction");
      }
      // Near the optimum the barrier Hessian is numerically singular along
      // the optimal face and Newton stops contracting; a decrement this
      // small still pins c'y to within a few nu/tau.
      if (decrement < 1e-10 || (decrement < 1e-3 && decrement > 0.5 * last_decrement)) {
        centered = true;
        break;
      }
      last_decrement = decrement;
      // Damped Newton step for a self-concordant barrier; it stays feasible
      // and decreases phi without comparing (roundoff-limited) values.
      const double lambda = std::sqrt(decrement);
      double alpha = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
      BarrierEval next;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        next = barrier_value(prob, y + alpha * dy, tau);
        if (next.inside) break;
      }
      if (!next.inside) {
        centered = decrement < 1e-6;
        break;
      }
      y += alpha * dy;
      out.y = y;
      if (early_stop && early_stop(y)) {
        out.pobj = prob.c.dot(y);
        out.stopped_early = true;
        out.iterations = newton_total;
        return out;
      }
    }
    out.y = y;
    out.pobj = prob.c.dot(y);
    out.dobj = out.pobj - nu / tau;
    out.rel_gap = (nu / tau) / (1.0 + std::abs(out.pobj));
    out.iterations = newton_total;
    if (centered) {
      best = out;
      has_best = true;
    }
    if (out.rel_gap < tol) {
      out.converged = centered;
      if (!centered) out.message = "final centering step stalled";
      return out;
    }
    tau *= kGrowth;
  }
  return finish("iteration limit reached");
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace

Eigen::MatrixXd LmiConstraint::evaluate(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd m = constant;
  for (const auto& t : terms) m += y(t.variable) * t.coefficient;
  return m;
}

int ConicProblem::add_symmetric(std::string name, int n) {
  blocks_.push_back({std::move(name), VariableKind::kSymmetric, n, n, num_variables_});
  num_variables_ += blocks_.back().size();
  objective_ = Eigen::VectorXd::Zero(num_variables_);
  return static_cast<int>(blocks_.size()) - 1;
}

int ConicProblem::add_full(std::string name, int rows, int cols) {
  blocks_.push_back({std::move(name), VariableKind::kFull, rows, cols, num_variables_});
  num_variables_ += blocks_.back().size();
  objective_ = Eigen::VectorXd::Zero(num_variables_);
  return static_cast<int>(blocks_.size()) - 1;
}

Eigen::MatrixXd ConicProblem::unpack(int index, const Eigen::VectorXd& y) const {
  const VariableBlock& blk = blocks_.at(index);
  Eigen::MatrixXd m(blk.rows, blk.cols);
  int k = blk.offset;
  if (blk.kind == VariableKind::kSymmetric) {
    for (int j = 0; j < blk.cols; ++j) {
      m(j, j) = y(k++);
      for (int i = j + 1; i < blk.rows; ++i) {
        m(i, j) = m(j, i) = y(k++) / kSqrt2;
      }
    }
  } else {
    for (int j = 0; j < blk.cols; ++j) {
      for (int i = 0; i < blk.rows; ++i) m(i, j) = y(k++);
    }
  }
  return m;
}

void ConicProblem::pack(int index, const Eigen::MatrixXd& value, Eigen::VectorXd& y) const {
  const VariableBlock& blk = blocks_.at(index);
  int k = blk.offset;
  if (blk.kind == VariableKind::kSymmetric) {
    for (int j = 0; j < blk.cols; ++j) {
      y(k++) = value(j, j);
      for (int i = j + 1; i < blk.rows; ++i) y(k++) = kSqrt2 * 0.5 * (value(i, j) + value(j, i));
    }
  } else {
    for (int j = 0; j < blk.cols; ++j) {
      for (int i = 0; i < blk.rows; ++i) y(k++) = value(i, j);
    }
  }
}

void ConicProblem::add_constraint(LmiConstraint constraint) {
  if (constraint.constant.rows() != constraint.constant.cols()) {
    throw std::invalid_argument("LMI constant must be square");
  }
  for (const auto& t : constraint.terms) {
    if (t.variable < 0 || t.variable >= num_variables_) throw std::out_of_range("LMI term variable");
    if (t.coefficient.rows() != constraint.dim() || t.coefficient.cols() != constraint.dim()) {
      throw std::invalid_argument("LMI term size mismatch");
    }
  }
  constraints_.push_back(std::move(constraint));
}

double symmetry_defect(const ConicProblem& problem) {
  double defect = 0.0;
  for (const auto& c : problem.constraints()) {
    defect = std::max(defect, (c.constant - c.constant.transpose()).cwiseAbs().maxCoeff());
    for (const auto& t : c.terms) {
      defect = std::max(defect, (t.coefficient - t.coefficient.transpose()).cwiseAbs().maxCoeff());
    }
  }
  return defect;
}

SolveResult solve(const ConicProblem& problem, const SolverOptions& options) {
  const int n_all = problem.num_variables();
  SolveResult result;

  // Eliminate fixed scalars.
  Eigen::VectorXd fixed_value = Eigen::VectorXd::Zero(n_all);
  std::vector<int> reduced(n_all, 0);
  for (const auto& [k, v] : problem.fixed()) {
    reduced.at(k) = -1;
    fixed_value(k) = v;
  }
  int nv = 0;
  for (int k = 0; k < n_all; ++k) {
    if (reduced[k] >= 0) reduced[k] = nv++;
  }

  InequalityForm form;
  form.num_variables = nv;
  form.c = Eigen::VectorXd::Zero(nv);
  double objective_offset = 0.0;
  for (int k = 0; k < n_all; ++k) {
    if (reduced[k] >= 0) {
      form.c(reduced[k]) = problem.objective()(k);
    } else {
      objective_offset += problem.objective()(k) * fixed_value(k);
    }
  }

  const double eps = problem.epsilon();
  for (const auto& con : problem.constraints()) {
    const double sign = con.sense == Sense::kPositive ? 1.0 : -1.0;
    const Eigen::Index d = con.dim();
    Cone cone;
    cone.f0 = sign * con.constant - eps * Eigen::MatrixXd::Identity(d, d);
    for (const auto& t : con.terms) {
      const int r = reduced[t.variable];
      if (r < 0) {
        cone.f0 += sign * fixed_value(t.variable) * t.coefficient;
      } else {
        cone.terms.emplace_back(r, sign * t.coefficient);
      }
    }
    double largest = cone.f0.cwiseAbs().maxCoeff();
    for (const auto& [k, f] : cone.terms) largest = std::max(largest, f.cwiseAbs().maxCoeff());
    if (largest > options.balance_limit) {
      const double scale = options.balance_limit / largest;
      cone.f0 *= scale;
      for (auto& [k, f] : cone.terms) f *= scale;
    }
    form.cones.push_back(std::move(cone));
  }

  const double bound = options.variable_bound;
  form.lp_b = Eigen::VectorXd::Constant(2 * nv, bound);
  form.lp_g = Eigen::MatrixXd::Zero(2 * nv, nv);
  for (int k = 0; k < nv; ++k) {
    form.lp_g(2 * k, k) = -1.0;
    form.lp_g(2 * k + 1, k) = 1.0;
  }

  // Phase I: minimize t subject to cone + t*I >= 0 until t is clearly negative.
  InequalityForm phase1 = form;
  phase1.num_variables = nv + 1;
  phase1.c = Eigen::VectorXd::Zero(nv + 1);
  phase1.c(nv) = 1.0;
  phase1.lp_g.conservativeResize(Eigen::NoChange, nv + 1);
  phase1.lp_g.col(nv).setZero();
  double worst = 0.0;
  for (auto& cone : phase1.cones) {
    worst = std::min(worst, min_eigenvalue(cone.f0));
    cone.terms.emplace_back(nv, Eigen::MatrixXd::Identity(cone.f0.rows(), cone.f0.cols()));
  }
  Eigen::VectorXd y1 = Eigen::VectorXd::Zero(nv + 1);
  y1(nv) = 1.0 - worst;
  constexpr double kInteriorTarget = 1e-3;
  const auto p1 = run_ipm(
      phase1, y1, [&](const Eigen::VectorXd& y) { return y(nv) < -kInteriorTarget; }, 1e-9,
      options.max_iterations);
  Eigen::VectorXd y_start = p1.y.head(nv);
  if (!p1.stopped_early) {
    if (p1.y(nv) >= -1e-10) {
      result.status = SolveStatus::kInfeasible;
      result.iterations = p1.iterations;
      result.message = "no strictly feasible point (phase I bound " + std::to_string(p1.y(nv)) + ")";
      return result;
    }
  }

  const auto p2 = run_ipm(form, y_start, nullptr, options.tolerance, options.max_iterations);
  result.iterations = p1.iterations + p2.iterations;
  result.relative_gap = p2.rel_gap;
  result.y = Eigen::VectorXd::Zero(n_all);
  for (int k = 0; k < n_all; ++k) {
    result.y(k) = reduced[k] >= 0 ? p2.y(reduced[k]) : fixed_value(k);
  }
  result.objective = p2.pobj + objective_offset;
  result.dual_objective = p2.dobj + objective_offset;
  result.margin = std::numeric_limits<double>::infinity();
  for (const auto& con : problem.constraints()) {
    const Eigen::MatrixXd m = con.evaluate(result.y);
    result.margin = std::min(result.margin, min_eigenvalue(con.sense == Sense::kPositive ? m : Eigen::MatrixXd(-m)));
  }

  if (p2.converged) {
    result.status = SolveStatus::kOptimal;
  } else if (p2.rel_gap < 1e-7) {
    // Numerically stalled close to the optimum; still a valid interior point.
    result.status = SolveStatus::kOptimal;
    result.message = p2.message;
  } else {
    result.status = SolveStatus::kFailure;
    result.message = p2.message;
  }
  if (result.status == SolveStatus::kOptimal && p2.y.size() > 0 && p2.y.cwiseAbs().maxCoeff() > 0.99 * bound) {
    result.status = SolveStatus::kBoundReached;
    result.message = "solution reached the variable bound";
  }
  return result;
}

}  // namespace hopfilter::conic
