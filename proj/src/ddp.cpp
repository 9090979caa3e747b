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

#include "hddp/ddp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hddp/qp.hpp"

namespace hddp {
namespace {

constexpr double kDivergedStateNorm = 1e8;

// Feedback for state perturbations with the active set held fixed: the
// quadratic model is minimized over the null space of the active inequality
// normals stacked with all equality rows, so feedback produces no motion
// along tight constraints. This is the gain for which the value-propagation
// formulas below are exact, and it reduces to -Q_uu^{-1} Q_xu^T when nothing
// is active.
Eigen::MatrixXd constrained_gain(const Eigen::LLT<Eigen::MatrixXd>& quu_llt,
                                 const Eigen::MatrixXd& q_uu,
                                 const Eigen::MatrixXd& q_xu,
                                 const InputConstraintSet& cons,
                                 const std::vector<int>& active) {
  const int m = static_cast<int>(q_uu.rows());
  const int rows = static_cast<int>(active.size()) + cons.num_equalities();
  if (rows == 0) return Eigen::MatrixXd(-quu_llt.solve(q_xu.transpose()));
  Eigen::MatrixXd c(rows, m);
  for (size_t i = 0; i < active.size(); ++i) {
    c.row(static_cast<int>(i)) = cons.A.row(active[i]);
  }
  if (cons.num_equalities() > 0) c.bottomRows(cons.num_equalities()) = cons.G;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c.transpose());
  qr.setThreshold(1e-12);
  const int rank = static_cast<int>(qr.rank());
  if (rank >= m) return Eigen::MatrixXd::Zero(m, q_xu.rows());
  const Eigen::MatrixXd basis =
      (qr.householderQ() * Eigen::MatrixXd::Identity(m, m)).rightCols(m - rank);
  return -basis * (basis.transpose() * q_uu * basis)
                      .llt()
                      .solve(basis.transpose() * q_xu.transpose());
}

}  // namespace

QExpansion q_expansion(const ValueExpansion& value_next,
                       const Eigen::VectorXd& lx, const Eigen::VectorXd& lu,
                       const Eigen::MatrixXd& lxx, const Eigen::MatrixXd& luu,
                       const Eigen::MatrixXd& lxu, const Eigen::MatrixXd& fx,
                       const Eigen::MatrixXd& fu, double reg) {
  QExpansion q;
  q.q_x = lx + fx.transpose() * value_next.v_x;
  q.q_u = lu + fu.transpose() * value_next.v_x;
  q.Q_xx = lxx + fx.transpose() * value_next.v_xx * fx;
  q.Q_xu = lxu + fx.transpose() * value_next.v_xx * fu;
  const int m = static_cast<int>(fu.cols());
  q.Q_uu = luu + fu.transpose() * value_next.v_xx * fu +
           reg * (Eigen::MatrixXd::Identity(m, m) +
                  fu.transpose() * fu);
  q.Q_xx = 0.5 * (q.Q_xx + q.Q_xx.transpose()).eval();
  q.Q_uu = 0.5 * (q.Q_uu + q.Q_uu.transpose()).eval();
  return q;
}

std::optional<BackwardPassResult> backward_pass(const DynamicsModel& model,
                                                const QuadraticCost& cost,
                                                const Trajectory& traj,
                                                double reg, int* fail_step) {
  const int n_steps = traj.horizon();
  BackwardPassResult out;
  out.law.feedforward.resize(n_steps);
  out.law.feedback.resize(n_steps);

  ValueExpansion value;
  value.delta_v = 0.0;
  cost.terminal_expansion(traj.states[n_steps], &value.v_x, &value.v_xx);

  Eigen::MatrixXd fx, fu, lxx, luu, lxu;
  Eigen::VectorXd lx, lu;
  for (int k = n_steps - 1; k >= 0; --k) {
    const State& x = traj.states[k];
    const Control& u = traj.inputs[k];
    const int mode = traj.modes[k];
    linearize(model, x, u, mode, &fx, &fu);
    cost.stage_expansion(x, u, &lx, &lu, &lxx, &luu, &lxu);
    const QExpansion q = q_expansion(value, lx, lu, lxx, luu, lxu, fx, fu, reg);
    if (!q.q_u.allFinite() || !q.Q_uu.allFinite() || !q.Q_xx.allFinite()) {
      if (fail_step) *fail_step = k;
      return std::nullopt;
    }

    const InputConstraintSet cons = model.constraints(x, mode);
    QuadraticProgram qp;
    qp.H = q.Q_uu;
    qp.g = q.q_u;
    qp.A = cons.A;
    qp.b = cons.num_inequalities() > 0
               ? Eigen::VectorXd(cons.b - cons.A * u)
               : cons.b;
    qp.G = cons.G;
    qp.h = cons.num_equalities() > 0 ? Eigen::VectorXd(cons.h - cons.G * u)
                                     : cons.h;
    QPSolution qs;
    try {
      qs = solve_qp(qp);
    } catch (const std::invalid_argument&) {
      if (fail_step) *fail_step = k;
      return std::nullopt;
    }
    if (qs.status != QPStatus::kOptimal) {
      if (fail_step) *fail_step = k;
      return std::nullopt;
    }
    const Eigen::VectorXd& k_ff = qs.z;

    Eigen::LLT<Eigen::MatrixXd> llt(q.Q_uu);
    if (llt.info() != Eigen::Success) {
      if (fail_step) *fail_step = k;
      return std::nullopt;
    }
    const Eigen::MatrixXd gain =
        constrained_gain(llt, q.Q_uu, q.Q_xu, cons, qs.active_set);

    out.law.feedforward[k] = k_ff;
    out.law.feedback[k] = gain;
    out.dv1 += k_ff.dot(q.q_u);
    out.dv2 += 0.5 * k_ff.dot(q.Q_uu * k_ff);

    value.delta_v += 0.5 * k_ff.dot(q.Q_uu * k_ff);
    value.v_x = q.q_x - gain.transpose() * (q.Q_uu * k_ff);
    value.v_xx = q.Q_xx - gain.transpose() * q.Q_uu * gain;
    value.v_xx = 0.5 * (value.v_xx + value.v_xx.transpose()).eval();
    if (!value.v_x.allFinite() || !value.v_xx.allFinite()) {
      if (fail_step) *fail_step = k;
      return std::nullopt;
    }
  }
  return out;
}

std::optional<Trajectory> forward_pass(const DynamicsModel& model,
                                       const Trajectory& nominal,
                                       const ControlLaw& law, double alpha,
                                       const State* start) {
  const int n_steps = nominal.horizon();
  Trajectory out;
  out.states.reserve(n_steps + 1);
  out.inputs.resize(n_steps);
  out.modes = nominal.modes;
  out.states.push_back(start ? *start : nominal.states[0]);
  for (int k = 0; k < n_steps; ++k) {
    const Eigen::VectorXd dx = out.states[k] - nominal.states[k];
    Eigen::VectorXd u = nominal.inputs[k] + alpha * law.feedforward[k] +
                        law.feedback[k] * dx;
    const InputConstraintSet cons = model.constraints(out.states[k],
                                                      nominal.modes[k]);
    try {
      u = project_feasible(u, cons);
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
    State next = model.step(out.states[k], u, nominal.modes[k]);
    if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kDivergedStateNorm) {
      return std::nullopt;
    }
    out.inputs[k] = u;
    out.states.push_back(std::move(next));
  }
  return out;
}

DDPResult solve(const DynamicsModel& model, const QuadraticCost& cost,
                const State& x0, const std::vector<Control>& initial_inputs,
                const std::vector<int>& modes, const DDPConfig& config) {
  if (initial_inputs.size() != modes.size()) {
    throw std::invalid_argument("solve: inputs and modes length mismatch");
  }
  const int n_steps = static_cast<int>(initial_inputs.size());

  DDPResult result;
  // Initial rollout; inputs are projected so the feasibility invariant holds
  // from the start (feasible inputs pass through unchanged).
  {
    Trajectory traj;
    traj.states.push_back(x0);
    traj.modes = modes;
    traj.inputs.resize(n_steps);
    for (int k = 0; k < n_steps; ++k) {
      const InputConstraintSet cons =
          model.constraints(traj.states.back(), modes[k]);
      traj.inputs[k] = project_feasible(initial_inputs[k], cons);
      State next = model.step(traj.states.back(), traj.inputs[k], modes[k]);
      if (!next.allFinite()) {
        throw std::runtime_error("solve: initial rollout diverged at step " +
                                 std::to_string(k + 1));
      }
      traj.states.push_back(std::move(next));
    }
    result.traj = std::move(traj);
  }
  result.cost = total_cost(cost, result.traj);
  result.cost_log.push_back(result.cost);

  double reg = config.reg_init;
  bool law_fresh = false;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    result.iterations = iter + 1;
    const auto bp = backward_pass(model, cost, result.traj, reg);
    if (!bp) {
      reg *= config.reg_growth;
      if (reg > config.reg_max) break;
      continue;
    }
    result.law = bp->law;
    law_fresh = true;

    double ff_norm = 0.0;
    for (const auto& k_ff : bp->law.feedforward) {
      if (k_ff.size() > 0) {
        ff_norm = std::max(ff_norm, k_ff.cwiseAbs().maxCoeff());
      }
    }
    if (ff_norm < config.feedforward_tolerance) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < config.num_alphas; ++ls, alpha *= 0.5) {
      const double expected = bp->expected_reduction(alpha);
      if (expected <= 0.0) continue;
      const auto candidate =
          forward_pass(model, result.traj, bp->law, alpha);
      if (!candidate) continue;
      const double new_cost = total_cost(cost, *candidate);
      if (!std::isfinite(new_cost)) continue;
      const double actual = result.cost - new_cost;
      if (actual >= config.accept_ratio * expected) {
        const double prev_cost = result.cost;
        result.traj = *candidate;
        result.cost = new_cost;
        result.cost_log.push_back(new_cost);
        law_fresh = false;  // law was linearized about the previous nominal
        accepted = true;
        reg = std::max(reg * config.reg_shrink, config.reg_min);
        if (actual < config.cost_tolerance *
                         std::max(1.0, std::abs(prev_cost))) {
          result.converged = true;
        }
        break;
      }
    }
    if (result.converged) break;
    if (!accepted) {
      reg *= config.reg_growth;
      if (reg > config.reg_max) break;
    }
  }

  if (!law_fresh) {
    // Pair the returned law with the returned trajectory.
    const auto bp = backward_pass(model, cost, result.traj,
                                  std::max(reg, config.reg_min));
    if (bp) result.law = bp->law;
  }
  result.regularization = std::min(reg, config.reg_max);
  return result;
}

}  // namespace hddp
