/*
 * Copyright 2026 The hddp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hddp/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hddp {
namespace {

constexpr double kStepTol = 1e-12;
constexpr double kEqualityTol = 1e-9;

void validate(const QuadraticProgram& qp) {
  const int m = static_cast<int>(qp.H.rows());
  if (qp.H.cols() != m || qp.g.size() != m) {
    throw std::invalid_argument("qp: H must be square and match g");
  }
  if ((qp.H - qp.H.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * (1.0 + qp.H.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("qp: H must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(qp.H);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("qp: H must be positive definite");
  }
  if (qp.A.rows() != qp.b.size() || (qp.A.rows() > 0 && qp.A.cols() != m)) {
    throw std::invalid_argument("qp: inequality rows must match dimensions");
  }
  if (qp.G.rows() != qp.h.size() || (qp.G.rows() > 0 && qp.G.cols() != m)) {
    throw std::invalid_argument("qp: equality rows must match dimensions");
  }
}

// Working-set subproblem: minimize the (possibly elastic) objective subject
// to the rows in `work` held at equality, by the null-space method. Every
// intermediate stays at the scale of the answer — eliminating through
// H^{-1} instead would route the solve through the unconstrained minimizer,
// whose magnitude wrecks vertex accuracy whenever H is small against the
// working-set geometry. `scale` reports the largest intermediate magnitude
// so the caller can judge which step sizes are round-off rather than
// progress.
struct EqpResult {
  Eigen::VectorXd w;
  Eigen::VectorXd lambda;  // one per working row, in `work` order
  double scale = 1.0;
  bool ok = false;
};

EqpResult solve_eqp(const Eigen::MatrixXd& h,
                    const Eigen::LLT<Eigen::MatrixXd>& hllt,
                    const Eigen::VectorXd& grad, const Eigen::MatrixXd& rows,
                    const Eigen::VectorXd& rhs, const std::vector<int>& work) {
  EqpResult out;
  if (work.empty()) {
    out.w = hllt.solve(-grad);
    out.scale = 1.0 + out.w.cwiseAbs().maxCoeff();
    out.lambda.resize(0);
    out.ok = out.w.allFinite();
    return out;
  }
  const int n = static_cast<int>(rows.cols());
  const int nw = static_cast<int>(work.size());
  Eigen::MatrixXd cw(nw, n);
  Eigen::VectorXd dw(nw);
  for (int i = 0; i < nw; ++i) {
    cw.row(i) = rows.row(work[i]);
    dw(i) = rhs(work[i]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cw.transpose());
  qr.setThreshold(1e-12);
  if (qr.rank() < nw) return out;  // dependent working set
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> ccod(cw);
  ccod.setThreshold(1e-12);
  const Eigen::VectorXd w_part = ccod.solve(dw);
  out.w = w_part;
  if (nw < n) {
    const Eigen::MatrixXd null_basis =
        (qr.householderQ() * Eigen::MatrixXd::Identity(n, n))
            .rightCols(n - nw);
    out.w += null_basis *
             (null_basis.transpose() * h * null_basis)
                 .llt()
                 .solve(-null_basis.transpose() * (grad + h * w_part));
  }
  out.lambda = qr.solve(h * out.w + grad);
  out.scale = 1.0 + std::max(w_part.cwiseAbs().maxCoeff(),
                             out.w.cwiseAbs().maxCoeff());
  out.ok = out.w.allFinite() && out.lambda.allFinite();
  return out;
}

}  // namespace

double KKTResiduals::max() const {
  return std::max({stationarity, primal, dual, complementarity});
}

QPSolution solve_qp(const QuadraticProgram& qp, const QPOptions& opts) {
  validate(qp);
  const int m = static_cast<int>(qp.H.rows());
  const int p = static_cast<int>(qp.A.rows());
  const int q = static_cast<int>(qp.G.rows());

  QPSolution sol;
  sol.ineq_multipliers = Eigen::VectorXd::Zero(p);
  sol.eq_multipliers = Eigen::VectorXd::Zero(q);

  // Eliminate equalities: z = z_p + Z y with G z_p = h and G Z = 0.
  Eigen::VectorXd z_part = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd null_basis = Eigen::MatrixXd::Identity(m, m);
  if (q > 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(qp.G);
    z_part = cod.solve(qp.h);
    if ((qp.G * z_part - qp.h).cwiseAbs().maxCoeff() >
        kEqualityTol * (1.0 + qp.h.cwiseAbs().maxCoeff())) {
      sol.status = QPStatus::kInfeasible;  // inconsistent equality rows
      sol.z = z_part;
      return sol;
    }
    const int rank = static_cast<int>(cod.rank());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(qp.G.transpose());
    const Eigen::MatrixXd full_q =
        qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    null_basis = full_q.rightCols(m - rank);
  }
  const int d = static_cast<int>(null_basis.cols());

  // Rows backing the final duals, captured at an optimal exit of the main
  // loop together with their multipliers. When the loop cannot supply them
  // (pinned or unconstrained shortcuts) they are recovered from scratch.
  bool have_duals = false;
  std::vector<int> dual_support;
  std::vector<double> dual_values;

  const auto finish = [&](const Eigen::VectorXd& z,
                          const std::vector<int>& active, QPStatus status,
                          int iters) {
    sol.status = status;
    sol.z = z;
    sol.active_set = active;
    sol.iterations = iters;
    sol.objective = 0.5 * z.dot(qp.H * z) + qp.g.dot(z);
    if (status != QPStatus::kOptimal) return sol;
    Eigen::LLT<Eigen::MatrixXd> hfull(qp.H);
    std::vector<int> support = dual_support;
    if (!have_duals) {
      for (int i = 0; i < p; ++i) {
        if (std::abs(qp.A.row(i).dot(z) - qp.b(i)) <=
            1e-7 * (1.0 + std::abs(qp.b(i)))) {
          support.push_back(i);
        }
      }
    }
    // Polish: re-solve with the supporting rows pinned at equality, which
    // strips the round-off the active-set path accumulated. Adopted only if
    // the result stays feasible for every row it does not pin.
    {
      const int k = static_cast<int>(support.size());
      Eigen::MatrixXd c(k + q, m);
      Eigen::VectorXd e(k + q);
      for (int i = 0; i < k; ++i) {
        c.row(i) = qp.A.row(support[i]);
        e(i) = qp.b(support[i]);
      }
      if (q > 0) {
        c.bottomRows(q) = qp.G;
        e.tail(q) = qp.h;
      }
      Eigen::VectorXd z_pol;
      if (k + q == 0) {
        z_pol = hfull.solve(-qp.g);
      } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> ccod(c);
        ccod.setThreshold(1e-12);
        z_pol = ccod.solve(e);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> cqr(c.transpose());
        cqr.setThreshold(1e-12);
        const int rank = static_cast<int>(cqr.rank());
        if (rank < m) {
          const Eigen::MatrixXd basis =
              (cqr.householderQ() * Eigen::MatrixXd::Identity(m, m))
                  .rightCols(m - rank);
          z_pol += basis *
                   (basis.transpose() * qp.H * basis)
                       .llt()
                       .solve(-basis.transpose() * (qp.g + qp.H * z_pol));
        }
      }
      const bool ineq_ok =
          p == 0 || (qp.A * z_pol - qp.b).minCoeff() >=
                        -1e-9 * (1.0 + qp.b.cwiseAbs().maxCoeff());
      const bool eq_ok =
          q == 0 || (qp.G * z_pol - qp.h).cwiseAbs().maxCoeff() <=
                        1e-9 * (1.0 + qp.h.cwiseAbs().maxCoeff());
      if (z_pol.allFinite() && ineq_ok && eq_ok) {
        sol.z = z_pol;
        sol.objective = 0.5 * z_pol.dot(qp.H * z_pol) + qp.g.dot(z_pol);
      }
    }
    // A point still violating a constraint beyond round-off is not optimal,
    // whatever the loop concluded.
    const double ineq_viol =
        p == 0 ? 0.0 : -std::min(0.0, (qp.A * sol.z - qp.b).minCoeff());
    const double eq_viol =
        q == 0 ? 0.0 : (qp.G * sol.z - qp.h).cwiseAbs().maxCoeff();
    if (ineq_viol > 1e-7 * (1.0 + (p ? qp.b.cwiseAbs().maxCoeff() : 0.0)) ||
        eq_viol > 1e-7 * (1.0 + (q ? qp.h.cwiseAbs().maxCoeff() : 0.0))) {
      sol.status = QPStatus::kMaxIterations;
      return sol;
    }
    const Eigen::VectorXd res = qp.H * sol.z + qp.g;
    sol.ineq_multipliers.setZero();
    sol.eq_multipliers.setZero();
    if (have_duals) {
      for (size_t i = 0; i < dual_support.size(); ++i) {
        sol.ineq_multipliers(dual_support[i]) = std::max(0.0, dual_values[i]);
      }
      if (q > 0) {
        sol.eq_multipliers =
            qp.G.transpose().completeOrthogonalDecomposition().solve(
                res - qp.A.transpose() * sol.ineq_multipliers);
      }
      return sol;
    }
    // No duals from the loop: take the minimum-norm solution of
    // [A_act' G'] w = H z + g, pruning weakly active rows whose component
    // comes out negative.
    for (;;) {
      const int na = static_cast<int>(support.size());
      if (na + q == 0) break;
      Eigen::MatrixXd ct(m, na + q);
      for (int i = 0; i < na; ++i) {
        ct.col(i) = qp.A.row(support[i]).transpose();
      }
      if (q > 0) ct.rightCols(q) = qp.G.transpose();
      const Eigen::VectorXd mult =
          ct.completeOrthogonalDecomposition().solve(res);
      int worst = -1;
      for (int i = 0; i < na; ++i) {
        if (mult(i) < -1e-10 && (worst < 0 || mult(i) < mult(worst))) {
          worst = i;
        }
      }
      if (worst >= 0) {
        support.erase(support.begin() + worst);
        continue;
      }
      for (int i = 0; i < na; ++i) {
        sol.ineq_multipliers(support[i]) = std::max(0.0, mult(i));
      }
      if (q > 0) sol.eq_multipliers = mult.tail(q);
      break;
    }
    return sol;
  };

  if (d == 0) {
    // Equalities pin the point entirely.
    const Eigen::VectorXd z = z_part;
    std::vector<int> active;
    bool feasible = true;
    for (int i = 0; i < p; ++i) {
      const double slack = qp.A.row(i).dot(z) - qp.b(i);
      if (slack < -kEqualityTol) feasible = false;
      if (std::abs(slack) <= kEqualityTol) active.push_back(i);
    }
    return finish(z, active,
                  feasible ? QPStatus::kOptimal : QPStatus::kInfeasible, 0);
  }

  // Reduced problem in y, then an elastic coordinate t appended:
  //   minimize 1/2 y' Hr y + gr' y + M t + 1/2 eps t^2
  //   s.t.     Ar y + t >= br (each row),  t >= 0.
  const Eigen::MatrixXd h_red =
      null_basis.transpose() * qp.H * null_basis;
  const Eigen::VectorXd g_red =
      null_basis.transpose() * (qp.g + qp.H * z_part);
  Eigen::MatrixXd a_red(p, d);
  Eigen::VectorXd b_red(p);
  if (p > 0) {
    a_red = qp.A * null_basis;
    b_red = qp.b - qp.A * z_part;
  }

  if (p == 0) {
    const Eigen::VectorXd y = h_red.llt().solve(-g_red);
    return finish(z_part + null_basis * y, {}, QPStatus::kOptimal, 0);
  }

  double big_m = opts.big_m * std::max(1.0, g_red.cwiseAbs().maxCoeff());
  // The search runs in (y, t) with an elastic slack t shared by every row
  // until the y iterate is feasible on its own, then collapses to a plain
  // primal active-set method in y. Collapsing matters: it keeps the penalty
  // scale out of all later arithmetic, so multipliers and stationarity tests
  // at degenerate vertices work at the problem's own magnitude.
  // The elastic curvature sits at the Hessian's own scale (and never far
  // below big-M) so phase-one working-set solves stay well conditioned; it
  // does not bias the result since t is driven to zero before the phase ends.
  Eigen::MatrixXd h_el = Eigen::MatrixXd::Zero(d + 1, d + 1);
  h_el.topLeftCorner(d, d) = h_red;
  Eigen::LLT<Eigen::MatrixXd> hllt;
  const Eigen::MatrixXd* h_cur = &h_el;
  const auto refactor_elastic = [&] {
    h_el(d, d) = std::max({1.0, h_red.trace() / d, 1e-2 * big_m});
    hllt.compute(h_el);
    if (hllt.info() != Eigen::Success) {
      throw std::invalid_argument("qp: reduced Hessian not positive definite");
    }
  };
  refactor_elastic();

  // Constraint rows in (y, t): p elastic rows then the t >= 0 bound.
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(p + 1, d + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
  rows.topLeftCorner(p, d) = a_red;
  rows.col(d).setOnes();
  rhs.head(p) = b_red;

  Eigen::VectorXd grad(d + 1);
  grad.head(d) = g_red;
  grad(d) = big_m;

  // Start at the equality-constrained minimizer with just enough elastic
  // slack to cover the worst inequality violation.
  Eigen::VectorXd w(d + 1);
  w.head(d) = h_red.llt().solve(-g_red);
  std::vector<int> work;
  {
    int worst = -1;
    double t0 = 0.0;
    for (int i = 0; i < p; ++i) {
      const double viol = b_red(i) - a_red.row(i).dot(w.head(d));
      if (viol > t0) {
        t0 = viol;
        worst = i;
      }
    }
    w(d) = t0;
    if (worst >= 0) work.push_back(worst);
  }

  bool elastic = true;
  const auto try_collapse = [&](double tol) {
    if ((a_red * w.head(d) - b_red).minCoeff() < -tol) return;
    elastic = false;
    const Eigen::VectorXd y = w.head(d);
    const double carry_tol = std::max(tol, 1e-9);
    std::vector<int> carried;
    for (int idx : work) {
      if (idx < p &&
          std::abs(a_red.row(idx).dot(y) - b_red(idx)) <= carry_tol) {
        carried.push_back(idx);
      }
    }
    work = std::move(carried);
    w = y;
    rows = a_red;
    rhs = b_red;
    grad = g_red;
    h_cur = &h_red;
    hllt.compute(h_red);
  };
  try_collapse(1e-11);

  const int iter_cap = opts.iter_cap_factor * std::max(1, p + q);
  int iters = 0;
  int escalations = 0;
  bool optimal = false;

  while (iters < iter_cap) {
    ++iters;
    const EqpResult eqp = solve_eqp(*h_cur, hllt, grad, rows, rhs, work);
    if (!eqp.ok) {
      // Degenerate working set; drop the most recently added row.
      if (work.empty()) break;
      work.pop_back();
      continue;
    }
    const Eigen::VectorXd delta = eqp.w - w;
    // The stationarity threshold tracks the largest intermediate of the
    // working-set solve, so cancellation round-off cannot masquerade as a
    // genuine step at degenerate vertices. A full-dimensional working set
    // pins the point outright: whatever step the solve reports there is
    // round-off by construction. Near-parallel working rows likewise leak
    // the multiplier magnitude into the primal round-off, so the threshold
    // widens with it.
    const double step_size = delta.cwiseAbs().maxCoeff();
    const double point_scale = eqp.scale + w.cwiseAbs().maxCoeff();
    bool stationary = step_size <= kStepTol * point_scale ||
                      static_cast<int>(work.size()) == rows.cols();
    if (!stationary && !work.empty()) {
      const double dual_mag = eqp.lambda.cwiseAbs().maxCoeff();
      stationary = step_size <= kStepTol * (point_scale + dual_mag);
    }
    if (stationary) {
      // Move onto the subproblem solution only when doing so cannot push the
      // iterate materially outside the feasible region; otherwise judge the
      // multipliers where the iterate stands.
      if ((rows * eqp.w - rhs).minCoeff() >=
          -1e-9 * (1.0 + 1e-2 * rhs.cwiseAbs().maxCoeff())) {
        w = eqp.w;
      }
      if (elastic) {
        try_collapse(1e-11);
        if (!elastic) continue;  // re-derive duals at problem scale
      }
      // Stationary on the working set: check dual feasibility. Dropping the
      // lowest-index negative multiplier (Bland's rule) rules out cycling.
      int drop = -1;
      for (int i = 0; i < static_cast<int>(work.size()); ++i) {
        if (eqp.lambda(i) < -opts.dual_tol &&
            (drop < 0 || work[i] < work[drop])) {
          drop = i;
        }
      }
      if (drop >= 0) {
        work.erase(work.begin() + drop);
        continue;
      }
      const auto capture_duals = [&] {
        have_duals = true;
        for (int i = 0; i < static_cast<int>(work.size()); ++i) {
          if (work[i] < p) {
            dual_support.push_back(work[i]);
            dual_values.push_back(eqp.lambda(i));
          }
        }
      };
      if (!elastic) {
        capture_duals();
        optimal = true;
        break;
      }
      // Elastic optimum. Slack within the feasibility tolerance collapses
      // into the plain phase, which pulls the iterate exactly onto its
      // boundaries; escalating the penalty instead would only trade the
      // slack for conditioning. Larger slack means the penalty is too weak,
      // so escalate until the budget is spent, then report infeasibility.
      if (w(d) <= opts.infeasibility_tol) {
        try_collapse(std::max(1e-11, w(d) + 1e-9));
        if (!elastic) continue;
        capture_duals();  // collapse refused; settle for the elastic duals
        optimal = true;
        break;
      }
      if (escalations < opts.max_escalations) {
        ++escalations;
        big_m *= opts.big_m_growth;
        grad(d) = big_m;
        refactor_elastic();
        continue;
      }
      break;
    }
    // Ratio test over rows not in the working set: step exactly to the first
    // boundary hit, then let the lowest-indexed row at that boundary enter
    // (Bland's rule). Exact ties never happen in floating point, so rows
    // whose post-step residual sits within round-off of zero are grouped as
    // tied. Rows linearly dependent on the working set never enter: their
    // true rate of change along a working-set step is zero, so a blocking
    // slope for one is round-off, and admitting it would only force a
    // degenerate pivot that undoes itself.
    const auto in_work = [&](int i) {
      return std::find(work.begin(), work.end(), i) != work.end();
    };
    double alpha = 1.0;
    for (int i = 0; i < static_cast<int>(rows.rows()); ++i) {
      if (in_work(i)) continue;
      const double dir = rows.row(i).dot(delta);
      if (dir >= -1e-13) continue;
      const double gap = rows.row(i).dot(w) - rhs(i);
      alpha = std::min(alpha, std::max(0.0, gap / (-dir)));
    }
    int blocker = -1;
    if (alpha < 1.0) {
      const double slack_tol = 1e-10 * (1.0 + rhs.cwiseAbs().maxCoeff());
      const int nw = static_cast<int>(work.size());
      Eigen::MatrixXd stacked(nw + 1, rows.cols());
      for (int i = 0; i < nw; ++i) stacked.row(i) = rows.row(work[i]);
      for (int i = 0; i < static_cast<int>(rows.rows()); ++i) {
        if (in_work(i)) continue;
        const double dir = rows.row(i).dot(delta);
        if (dir >= -1e-13) continue;
        const double gap = rows.row(i).dot(w) - rhs(i);
        if (gap + alpha * dir > slack_tol) continue;
        stacked.row(nw) = rows.row(i);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(stacked);
        cod.setThreshold(1e-12);
        if (cod.rank() == nw + 1) {
          blocker = i;
          break;
        }
      }
    }
    // Insertion order is kept so a degenerate working set sheds its most
    // recently added row first.
    if (blocker >= 0) {
      w += alpha * delta;
      work.push_back(blocker);
    } else {
      // Unblocked, or blocked only by dependent rows at noise level; either
      // way the whole step is sound.
      w = eqp.w;
    }
    if (elastic) try_collapse(1e-11);
  }

  std::vector<int> active;
  for (int idx : work) {
    if (idx < p) active.push_back(idx);
  }
  std::sort(active.begin(), active.end());
  QPStatus status = QPStatus::kMaxIterations;
  if (optimal) {
    status = QPStatus::kOptimal;
  } else if (elastic && iters < iter_cap && w(d) > opts.infeasibility_tol) {
    status = QPStatus::kInfeasible;
  }
  return finish(z_part + null_basis * w.head(d), active, status, iters);
}

KKTResiduals kkt_residuals(const QuadraticProgram& qp, const QPSolution& sol) {
  KKTResiduals r;
  Eigen::VectorXd stat = qp.H * sol.z + qp.g;
  if (qp.A.rows() > 0) stat -= qp.A.transpose() * sol.ineq_multipliers;
  if (qp.G.rows() > 0) stat -= qp.G.transpose() * sol.eq_multipliers;
  r.stationarity = stat.cwiseAbs().maxCoeff();
  if (qp.A.rows() > 0) {
    const Eigen::VectorXd slack = qp.A * sol.z - qp.b;
    r.primal = std::max(0.0, (-slack).maxCoeff());
    r.dual = std::max(0.0, (-sol.ineq_multipliers).maxCoeff());
    r.complementarity =
        sol.ineq_multipliers.cwiseProduct(slack).cwiseAbs().maxCoeff();
  }
  if (qp.G.rows() > 0) {
    r.primal =
        std::max(r.primal, (qp.G * sol.z - qp.h).cwiseAbs().maxCoeff());
  }
  return r;
}

Eigen::VectorXd project_feasible(const Eigen::VectorXd& u,
                                 const InputConstraintSet& cons) {
  if (check_feasible(cons, u, 1e-12)) return u;
  switch (cons.form) {
    case InputConstraintSet::Form::kBox:
      return u.cwiseMax(cons.box_lo).cwiseMin(cons.box_hi);
    case InputConstraintSet::Form::kConeBox: {
      Eigen::VectorXd z = u;
      z.head<2>() = project_truncated_cone(u(0), u(1), cons.mu, cons.n_max);
      const int extra = static_cast<int>(u.size()) - 2;
      if (extra > 0) {
        z.tail(extra) =
            u.tail(extra).cwiseMax(cons.box_lo).cwiseMin(cons.box_hi);
      }
      return z;
    }
    case InputConstraintSet::Form::kGeneral:
      break;
  }
  QuadraticProgram qp;
  const int m = static_cast<int>(u.size());
  qp.H = 2.0 * Eigen::MatrixXd::Identity(m, m);
  qp.g = -2.0 * u;
  qp.A = cons.A;
  qp.b = cons.b;
  qp.G = cons.G;
  qp.h = cons.h;
  const QPSolution sol = solve_qp(qp);
  if (sol.status == QPStatus::kInfeasible) {
    throw std::runtime_error("project_feasible: empty feasible set");
  }
  if (sol.status != QPStatus::kOptimal) {
    throw std::runtime_error("project_feasible: projection did not converge");
  }
  return sol.z;
}

}  // namespace hddp
