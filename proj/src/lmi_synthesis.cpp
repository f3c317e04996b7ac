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

#include "hopfilter/lmi_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hopfilter/error.hpp"

namespace hopfilter {

namespace {

struct BlockOffsets {
  Eigen::Index h, g, x, z, size;
};

BlockOffsets offsets(const Dimensions& d) { return {0, d.n, d.n + d.m, 2 * d.n + d.m, 2 * d.n + d.m + d.r}; }

void mirror_lower(Matrix& m) { m.triangularView<Eigen::StrictlyUpper>() = m.transpose(); }

bool measurement_is_zero(const MjlsModel& model, int cluster) {
  const auto zero = [](const Matrix& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() <= kStructuralTolerance; };
  if (!zero(model.cluster_representative(cluster).cy)) return false;
  for (int i : model.clusters().members(cluster)) {
    if (!zero(model.mode(i).ey)) return false;
  }
  return true;
}

std::string describe_chain(const MjlsModel& model) {
  std::ostringstream os;
  os << "mode probabilities [";
  const Vector row = model.chain().row(0);
  for (Eigen::Index j = 0; j < row.size(); ++j) os << (j ? ", " : "") << row(j);
  os << "]";
  return os.str();
}

void require_ready(const MjlsModel& model) {
  if (!model.theorem1_ready()) {
    throw Error(ErrorCode::kNotTheorem1Ready, "A, Cy, Cz must be constant within each cluster");
  }
  if (!model.chain().is_bernoulli()) {
    throw Error(ErrorCode::kNonBernoulliChain, "synthesis requires identical transition rows");
  }
}

// Per-mode matrices entering the per-mode constraint. With fixed gains the
// F/K terms are folded in and the measurement channel vanishes.
struct EffectiveMode {
  Matrix a, j, cy, ey, cz, ez;
};

EffectiveMode effective_mode(const MjlsModel& model, int mode, const FilterGains* fixed) {
  const ModeMatrices& m = model.mode(mode);
  const int c = model.clusters().cluster_of(mode);
  const ModeMatrices& rep = model.cluster_representative(c);
  if (fixed == nullptr) return {rep.a, m.j, rep.cy, m.ey, rep.cz, m.ez};
  const FilterGains::Cluster& g = fixed->clusters.at(c);
  return {rep.a - g.bf * rep.cy, m.j - g.bf * m.ey, Matrix::Zero(rep.cy.rows(), rep.cy.cols()),
          Matrix::Zero(m.ey.rows(), m.ey.cols()), rep.cz - g.df * rep.cy, m.ez - g.df * m.ey};
}

Theorem1Problem assemble(const MjlsModel& model, double epsilon, const FilterGains* fixed) {
  require_ready(model);
  const Dimensions d = model.dims();
  const int nm = model.num_modes();
  const int nc = model.clusters().num_clusters();
  if (fixed != nullptr) {
    if (fixed->num_clusters() != nc) throw Error(ErrorCode::kDimensionMismatch, "gain cluster count");
    for (const auto& g : fixed->clusters) {
      if (g.bf.rows() != d.n || g.bf.cols() != d.q || g.df.rows() != d.r || g.df.cols() != d.q) {
        throw Error(ErrorCode::kDimensionMismatch, "gain shape");
      }
      if (!g.bf.allFinite() || !g.df.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite gains");
    }
  }
  const Vector probs = model.chain().row(0);

  Theorem1Problem out;
  conic::ConicProblem& prob = out.problem;
  Theorem1Layout& lay = out.layout;
  lay.h.assign(nm, -1);
  lay.f.assign(nc, -1);
  lay.k.assign(nc, -1);
  for (int i = 0; i < nm; ++i) {
    if (probs(i) > 0.0) {
      lay.active_modes.push_back(i);
      lay.h[i] = prob.add_symmetric("H" + std::to_string(i), d.n);
    }
  }
  lay.x = prob.add_symmetric("X", d.n);
  if (fixed == nullptr) {
    for (int c = 0; c < nc; ++c) {
      if (measurement_is_zero(model, c)) continue;
      lay.f[c] = prob.add_full("F" + std::to_string(c), d.n, d.q);
      lay.k[c] = prob.add_full("K" + std::to_string(c), d.r, d.q);
    }
  }
  lay.gamma = prob.add_scalar("gamma");
  prob.set_epsilon(epsilon);

  const int nv = prob.num_variables();
  auto basis = [&](int block, int k) {
    Vector e = Vector::Zero(nv);
    e(prob.block(block).offset + k) = 1.0;
    return prob.unpack(block, e);
  };

  const BlockOffsets o = offsets(d);
  for (int i : lay.active_modes) {
    const EffectiveMode em = effective_mode(model, i, fixed);
    const int c = model.clusters().cluster_of(i);
    conic::LmiConstraint con;
    con.name = "mode" + std::to_string(i);
    con.sense = conic::Sense::kPositive;
    con.constant = Matrix::Zero(o.size, o.size);
    con.constant.block(o.z, o.h, d.r, d.n) = em.cz;
    con.constant.block(o.z, o.g, d.r, d.m) = em.ez;
    con.constant.block(o.z, o.z, d.r, d.r).setIdentity();
    mirror_lower(con.constant);

    auto add_term = [&](int variable, Matrix coef) {
      mirror_lower(coef);
      if (coef.cwiseAbs().maxCoeff() > 0.0) con.terms.push_back({variable, std::move(coef)});
    };
    const auto& hb = prob.block(lay.h[i]);
    for (int k = 0; k < hb.size(); ++k) {
      Matrix coef = Matrix::Zero(o.size, o.size);
      coef.block(o.h, o.h, d.n, d.n) = basis(lay.h[i], k);
      add_term(hb.offset + k, std::move(coef));
    }
    {
      Matrix coef = Matrix::Zero(o.size, o.size);
      coef.block(o.g, o.g, d.m, d.m).setIdentity();
      add_term(prob.block(lay.gamma).offset, std::move(coef));
    }
    const auto& xb = prob.block(lay.x);
    for (int k = 0; k < xb.size(); ++k) {
      const Matrix b = basis(lay.x, k);
      Matrix coef = Matrix::Zero(o.size, o.size);
      coef.block(o.x, o.h, d.n, d.n) = b * em.a;
      coef.block(o.x, o.g, d.n, d.m) = b * em.j;
      coef.block(o.x, o.x, d.n, d.n) = b;
      add_term(xb.offset + k, std::move(coef));
    }
    if (lay.f[c] >= 0) {
      const auto& fb = prob.block(lay.f[c]);
      for (int k = 0; k < fb.size(); ++k) {
        const Matrix b = basis(lay.f[c], k);
        Matrix coef = Matrix::Zero(o.size, o.size);
        coef.block(o.x, o.h, d.n, d.n) = b * em.cy;
        coef.block(o.x, o.g, d.n, d.m) = b * em.ey;
        add_term(fb.offset + k, std::move(coef));
      }
      const auto& kb = prob.block(lay.k[c]);
      for (int k = 0; k < kb.size(); ++k) {
        const Matrix b = basis(lay.k[c], k);
        Matrix coef = Matrix::Zero(o.size, o.size);
        coef.block(o.z, o.h, d.r, d.n) = -b * em.cy;
        coef.block(o.z, o.g, d.r, d.m) = -b * em.ey;
        add_term(kb.offset + k, std::move(coef));
      }
    }
    prob.add_constraint(std::move(con));
  }

  conic::LmiConstraint coupling;
  coupling.name = "coupling";
  coupling.sense = conic::Sense::kNegative;
  coupling.constant = Matrix::Zero(d.n, d.n);
  for (int i : lay.active_modes) {
    const auto& hb = prob.block(lay.h[i]);
    for (int k = 0; k < hb.size(); ++k) coupling.terms.push_back({hb.offset + k, probs(i) * basis(lay.h[i], k)});
  }
  const auto& xb = prob.block(lay.x);
  for (int k = 0; k < xb.size(); ++k) coupling.terms.push_back({xb.offset + k, -basis(lay.x, k)});
  prob.add_constraint(std::move(coupling));

  Vector objective = Vector::Zero(nv);
  objective(prob.block(lay.gamma).offset) = 1.0;
  prob.set_objective(std::move(objective));
  return out;
}

double resolve_epsilon(const MjlsModel& model, const SynthesisOptions& options) {
  const double eps = options.epsilon.value_or(default_epsilon(model));
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  return eps;
}

void raise_on_status(const conic::SolveResult& res, const MjlsModel& model) {
  switch (res.status) {
    case conic::SolveStatus::kOptimal:
      return;
    case conic::SolveStatus::kInfeasible:
    case conic::SolveStatus::kBoundReached:
      throw Error(ErrorCode::kInfeasible, "no certificate at " + describe_chain(model) + ": " + res.message);
    case conic::SolveStatus::kFailure:
      throw Error(ErrorCode::kSolverFailure, res.message + " at " + describe_chain(model));
  }
}

double min_eigen(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace

double default_epsilon(const MjlsModel& model) {
  double largest = 0.0;
  for (const auto& m : model.modes()) largest = std::max(largest, m.a.cwiseAbs().maxCoeff());
  return 1e-7 * (1.0 + largest);
}

Theorem1Problem assemble_theorem1(const MjlsModel& model, double epsilon) { return assemble(model, epsilon, nullptr); }

Theorem1Problem assemble_fixed_filter(const MjlsModel& model, const FilterGains& gains, double epsilon) {
  return assemble(model, epsilon, &gains);
}

SynthesisResult synthesize(const MjlsModel& model, const SynthesisOptions& options) {
  const double eps = resolve_epsilon(model, options);
  const Theorem1Problem t1 = assemble_theorem1(model, eps);
  const conic::SolveResult res = conic::solve(t1.problem, options.solver);
  raise_on_status(res, model);

  const Dimensions d = model.dims();
  const Theorem1Layout& lay = t1.layout;
  const conic::ConicProblem& prob = t1.problem;
  SynthesisResult out;
  out.epsilon = eps;
  out.active_modes = lay.active_modes;
  out.gamma = res.y(prob.block(lay.gamma).offset);
  out.hinf_norm = std::sqrt(std::max(out.gamma, 0.0));
  out.margin = res.margin;
  out.relative_gap = res.relative_gap;
  out.iterations = res.iterations;
  out.status = res.message.empty() ? "optimal" : "optimal (" + res.message + ")";

  Certificates& cert = out.certificates;
  cert.x = prob.unpack(lay.x, res.y);
  for (int i = 0; i < model.num_modes(); ++i) cert.h.push_back(lay.h[i] >= 0 ? prob.unpack(lay.h[i], res.y) : Matrix());

  Eigen::LLT<Matrix> x_chol(cert.x);
  const Vector x_eig = Eigen::SelfAdjointEigenSolver<Matrix>(cert.x, Eigen::EigenvaluesOnly).eigenvalues();
  if (x_chol.info() != Eigen::Success || x_eig(0) <= 0.0) {
    throw Error(ErrorCode::kSolverFailure, "returned X is not positive definite");
  }
  const double condition = x_eig(x_eig.size() - 1) / x_eig(0);
  if (condition > options.max_condition) {
    throw Error(ErrorCode::kIllConditioned,
                "condition number of X is " + std::to_string(condition) + " at " + describe_chain(model));
  }

  std::vector<Matrix> bf, df;
  for (int c = 0; c < model.clusters().num_clusters(); ++c) {
    if (lay.f[c] >= 0) {
      cert.f.push_back(prob.unpack(lay.f[c], res.y));
      cert.k.push_back(prob.unpack(lay.k[c], res.y));
      bf.push_back(-x_chol.solve(cert.f.back()));
      df.push_back(cert.k.back());
    } else {
      cert.f.push_back(Matrix::Zero(d.n, d.q));
      cert.k.push_back(Matrix::Zero(d.r, d.q));
      bf.push_back(Matrix::Zero(d.n, d.q));
      df.push_back(Matrix::Zero(d.r, d.q));
    }
  }
  out.gains = make_gains(model, bf, df);
  return out;
}

double analyze_fixed_filter(const MjlsModel& model, const FilterGains& gains, const SynthesisOptions& options) {
  const double eps = resolve_epsilon(model, options);
  const Theorem1Problem t1 = assemble_fixed_filter(model, gains, eps);
  const conic::SolveResult res = conic::solve(t1.problem, options.solver);
  raise_on_status(res, model);
  return res.y(t1.problem.block(t1.layout.gamma).offset);
}

bool feasible_at_gamma(const MjlsModel& model, double gamma, const SynthesisOptions& options) {
  const double eps = resolve_epsilon(model, options);
  Theorem1Problem t1 = assemble_theorem1(model, eps);
  t1.problem.fix_variable(t1.problem.block(t1.layout.gamma).offset, gamma);
  t1.problem.set_objective(Vector::Zero(t1.problem.num_variables()));
  const conic::SolveResult res = conic::solve(t1.problem, options.solver);
  return res.status != conic::SolveStatus::kInfeasible;
}

CertificateReport check_certificate(const MjlsModel& model, const SynthesisResult& result, double epsilon) {
  CertificateReport rep;
  rep.epsilon = epsilon;
  const Dimensions d = model.dims();
  const Certificates& c = result.certificates;
  const Vector probs = model.chain().row(0);
  const BlockOffsets o = offsets(d);
  bool ok = c.x.rows() == d.n && static_cast<int>(c.h.size()) == model.num_modes() &&
            static_cast<int>(c.f.size()) == model.clusters().num_clusters() &&
            static_cast<int>(c.k.size()) == model.clusters().num_clusters();
  if (!ok) return rep;

  Matrix coupling = -c.x;
  for (int i = 0; i < model.num_modes(); ++i) {
    if (!(probs(i) > 0.0)) continue;
    if (c.h[i].rows() != d.n) return rep;
    const ModeMatrices& m = model.mode(i);
    const int l = model.clusters().cluster_of(i);
    const ModeMatrices& rep_l = model.cluster_representative(l);
    Matrix lmi = Matrix::Zero(o.size, o.size);
    lmi.block(o.h, o.h, d.n, d.n) = c.h[i];
    lmi.block(o.g, o.g, d.m, d.m) = result.gamma * Matrix::Identity(d.m, d.m);
    lmi.block(o.x, o.h, d.n, d.n) = c.x * rep_l.a + c.f[l] * rep_l.cy;
    lmi.block(o.x, o.g, d.n, d.m) = c.x * m.j + c.f[l] * m.ey;
    lmi.block(o.x, o.x, d.n, d.n) = c.x;
    lmi.block(o.z, o.h, d.r, d.n) = rep_l.cz - c.k[l] * rep_l.cy;
    lmi.block(o.z, o.g, d.r, d.m) = m.ez - c.k[l] * m.ey;
    lmi.block(o.z, o.z, d.r, d.r).setIdentity();
    lmi.triangularView<Eigen::StrictlyUpper>() = lmi.transpose();
    const double e = min_eigen(lmi);
    rep.modes.push_back(i);
    rep.mode_min_eigen.push_back(e);
    ok = ok && e >= 0.5 * epsilon;
    coupling += probs(i) * c.h[i];
  }
  rep.coupling_max_eigen = -min_eigen(-coupling);
  rep.x_min_eigen = min_eigen(c.x);
  ok = ok && rep.coupling_max_eigen <= -0.5 * epsilon && rep.x_min_eigen > 0.0;
  rep.pass = ok;
  return rep;
}

}  // namespace hopfilter
