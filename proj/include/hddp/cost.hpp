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

#ifndef HDDP_COST_HPP
#define HDDP_COST_HPP

#include <vector>

#include <Eigen/Dense>

#include "hddp/types.hpp"

namespace hddp {

// Quadratic tracking cost
//   l(x, u)  = (x - goal)' Q (x - goal) + u' R u
//   l_N(x)   = (x - goal)' Q_N (x - goal)
// with diagonal weights. State coordinates listed in angle_indices are
// angles: their deviation from the goal is wrapped to (-pi, pi] before
// weighting, so e.g. 350 deg and -10 deg are the same error.
class QuadraticCost {
 public:
  QuadraticCost(Eigen::VectorXd q_diag, Eigen::VectorXd r_diag,
                Eigen::VectorXd qn_diag, State goal,
                std::vector<int> angle_indices = {});

  double stage(const State& x, const Control& u) const;
  double terminal(const State& x) const;

  // Goal-relative state error with angular coordinates wrapped.
  Eigen::VectorXd state_error(const State& x) const;

  void stage_expansion(const State& x, const Control& u, Eigen::VectorXd* lx,
                       Eigen::VectorXd* lu, Eigen::MatrixXd* lxx,
                       Eigen::MatrixXd* luu, Eigen::MatrixXd* lxu) const;
  void terminal_expansion(const State& x, Eigen::VectorXd* lx,
                          Eigen::MatrixXd* lxx) const;

  const State& goal() const { return goal_; }
  const std::vector<int>& angle_indices() const { return angle_indices_; }
  const Eigen::VectorXd& q_diag() const { return q_diag_; }
  const Eigen::VectorXd& r_diag() const { return r_diag_; }
  const Eigen::VectorXd& qn_diag() const { return qn_diag_; }

 private:
  Eigen::VectorXd q_diag_;
  Eigen::VectorXd r_diag_;
  Eigen::VectorXd qn_diag_;
  State goal_;
  std::vector<int> angle_indices_;
};

// Sum of stage costs over all N steps plus the terminal cost at states[N].
double total_cost(const QuadraticCost& cost, const Trajectory& traj);

}  // namespace hddp

#endif  // HDDP_COST_HPP
