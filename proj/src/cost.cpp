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

#include "hddp/cost.hpp"

#include <stdexcept>

namespace hddp {

QuadraticCost::QuadraticCost(Eigen::VectorXd q_diag, Eigen::VectorXd r_diag,
                             Eigen::VectorXd qn_diag, State goal,
                             std::vector<int> angle_indices)
    : q_diag_(std::move(q_diag)),
      r_diag_(std::move(r_diag)),
      qn_diag_(std::move(qn_diag)),
      goal_(std::move(goal)),
      angle_indices_(std::move(angle_indices)) {
  if (q_diag_.size() != goal_.size() || qn_diag_.size() != goal_.size()) {
    throw std::invalid_argument("cost: Q/Q_N diagonal size must match goal");
  }
  if ((q_diag_.array() < 0.0).any() || (qn_diag_.array() < 0.0).any()) {
    throw std::invalid_argument("cost: Q/Q_N must be nonnegative");
  }
  if ((r_diag_.array() <= 0.0).any()) {
    throw std::invalid_argument("cost: R must be positive");
  }
  for (int idx : angle_indices_) {
    if (idx < 0 || idx >= goal_.size()) {
      throw std::invalid_argument("cost: angle index out of range");
    }
  }
}

Eigen::VectorXd QuadraticCost::state_error(const State& x) const {
  Eigen::VectorXd dx = x - goal_;
  for (int idx : angle_indices_) dx(idx) = wrap_angle(dx(idx));
  return dx;
}

double QuadraticCost::stage(const State& x, const Control& u) const {
  const Eigen::VectorXd dx = state_error(x);
  return dx.dot(q_diag_.cwiseProduct(dx)) + u.dot(r_diag_.cwiseProduct(u));
}

double QuadraticCost::terminal(const State& x) const {
  const Eigen::VectorXd dx = state_error(x);
  return dx.dot(qn_diag_.cwiseProduct(dx));
}

void QuadraticCost::stage_expansion(const State& x, const Control& u,
                                    Eigen::VectorXd* lx, Eigen::VectorXd* lu,
                                    Eigen::MatrixXd* lxx, Eigen::MatrixXd* luu,
                                    Eigen::MatrixXd* lxu) const {
  const Eigen::VectorXd dx = state_error(x);
  *lx = 2.0 * q_diag_.cwiseProduct(dx);
  *lu = 2.0 * r_diag_.cwiseProduct(u);
  *lxx = 2.0 * q_diag_.asDiagonal();
  *luu = 2.0 * r_diag_.asDiagonal();
  *lxu = Eigen::MatrixXd::Zero(x.size(), u.size());
}

void QuadraticCost::terminal_expansion(const State& x, Eigen::VectorXd* lx,
                                       Eigen::MatrixXd* lxx) const {
  const Eigen::VectorXd dx = state_error(x);
  *lx = 2.0 * qn_diag_.cwiseProduct(dx);
  *lxx = 2.0 * qn_diag_.asDiagonal();
}

double total_cost(const QuadraticCost& cost, const Trajectory& traj) {
  double j = 0.0;
  for (int k = 0; k < traj.horizon(); ++k) {
    j += cost.stage(traj.states[k], traj.inputs[k]);
  }
  j += cost.terminal(traj.states.back());
  return j;
}

}  // namespace hddp
