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

#ifndef HDDP_DDP_HPP
#define HDDP_DDP_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hddp/cost.hpp"
#include "hddp/dynamics.hpp"
#include "hddp/types.hpp"

namespace hddp {

struct DDPConfig {
  int max_iterations = 50;
  // Converged when the relative cost decrease or the feedforward max-norm
  // falls below these.
  double cost_tolerance = 1e-6;
  double feedforward_tolerance = 1e-6;
  // Levenberg-style regularization schedule.
  double reg_init = 1e-6;
  double reg_growth = 10.0;
  double reg_shrink = 0.5;
  double reg_min = 1e-9;
  double reg_max = 1e9;
  // Line search: alphas 1, 1/2, ..., 2^-(num_alphas-1); accept a candidate
  // iff actual reduction >= accept_ratio * expected reduction.
  int num_alphas = 11;
  double accept_ratio = 1e-4;
};

struct DDPResult {
  Trajectory traj;
  ControlLaw law;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_log;  // cost after each accepted iteration
  double regularization = 0.0;   // value in effect at exit
};

// Quadratic expansion of the action-value function at one step. Q_uu carries
// the regularization; Q_xx and Q_xu do not.
struct QExpansion {
  Eigen::VectorXd q_x;
  Eigen::VectorXd q_u;
  Eigen::MatrixXd Q_xx;
  Eigen::MatrixXd Q_xu;
  Eigen::MatrixXd Q_uu;
};

struct ValueExpansion {
  double delta_v = 0.0;
  Eigen::VectorXd v_x;
  Eigen::MatrixXd v_xx;
};

QExpansion q_expansion(const ValueExpansion& value_next,
                       const Eigen::VectorXd& lx, const Eigen::VectorXd& lu,
                       const Eigen::MatrixXd& lxx, const Eigen::MatrixXd& luu,
                       const Eigen::MatrixXd& lxu, const Eigen::MatrixXd& fx,
                       const Eigen::MatrixXd& fu, double reg);

struct BackwardPassResult {
  ControlLaw law;
  // Expected-improvement model coefficients: reduction(alpha) =
  // -(alpha * dv1 + alpha^2 * dv2) with dv1 = sum k'q_u <= 0 and
  // dv2 = sum 1/2 k'Q_uu k >= 0.
  double dv1 = 0.0;
  double dv2 = 0.0;

  double expected_reduction(double alpha) const {
    return -(alpha * dv1 + alpha * alpha * dv2);
  }
};

// One sweep of the value recursion. Feedforwards come from per-step
// projection QPs over the mode's input set; feedback gains are the
// unconstrained gains with rows projected onto the null space of the active
// constraint normals. Returns nullopt (with the failing step index in
// *fail_step if given) when a step's QP cannot be solved or the expansion
// turns non-finite; the caller reacts by raising regularization.
std::optional<BackwardPassResult> backward_pass(const DynamicsModel& model,
                                                const QuadraticCost& cost,
                                                const Trajectory& traj,
                                                double reg,
                                                int* fail_step = nullptr);

// Rolls the policy out with feedforward scaled by alpha and feedback applied
// in full; every applied input is projected onto its step's feasible set.
// start overrides the initial state when provided (used for closed-loop
// studies). Returns nullopt if the state diverges.
std::optional<Trajectory> forward_pass(const DynamicsModel& model,
                                       const Trajectory& nominal,
                                       const ControlLaw& law, double alpha,
                                       const State* start = nullptr);

// Full solve loop: backward pass, line search over forward passes,
// regularization schedule. Anytime: with max_iterations = 0 the initial
// rollout (inputs projected feasible) is returned unchanged.
DDPResult solve(const DynamicsModel& model, const QuadraticCost& cost,
                const State& x0, const std::vector<Control>& initial_inputs,
                const std::vector<int>& modes, const DDPConfig& config);

}  // namespace hddp

#endif  // HDDP_DDP_HPP
