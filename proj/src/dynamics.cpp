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

#include "hddp/dynamics.hpp"

#include <stdexcept>
#include <string>

namespace hddp {

void DynamicsModel::jacobians(const State& x, const Control& u, int mode,
                              Eigen::MatrixXd* fx, Eigen::MatrixXd* fu) const {
  const double eps = 1e-6;
  const int n = state_dim();
  const int m = input_dim();
  fx->resize(n, n);
  fu->resize(n, m);
  for (int i = 0; i < n; ++i) {
    State xp = x, xm = x;
    xp(i) += eps;
    xm(i) -= eps;
    fx->col(i) = (step(xp, u, mode) - step(xm, u, mode)) / (2.0 * eps);
  }
  for (int i = 0; i < m; ++i) {
    Control up = u, um = u;
    up(i) += eps;
    um(i) -= eps;
    fu->col(i) = (step(x, up, mode) - step(x, um, mode)) / (2.0 * eps);
  }
}

void DynamicsModel::equilibrium_system(const State&, int, Eigen::MatrixXd* c,
                                       Eigen::VectorXd* d) const {
  c->resize(0, input_dim());
  d->resize(0);
}

Trajectory rollout(const DynamicsModel& model, const State& x0,
                   const std::vector<Control>& inputs,
                   const std::vector<int>& modes) {
  if (inputs.size() != modes.size()) {
    throw std::invalid_argument("rollout: inputs and modes length mismatch");
  }
  Trajectory traj;
  traj.states.reserve(inputs.size() + 1);
  traj.states.push_back(x0);
  traj.inputs = inputs;
  traj.modes = modes;
  for (size_t k = 0; k < inputs.size(); ++k) {
    State next = model.step(traj.states.back(), inputs[k], modes[k]);
    if (!next.allFinite()) {
      throw std::runtime_error("rollout: non-finite state at step " +
                               std::to_string(k + 1));
    }
    traj.states.push_back(std::move(next));
  }
  return traj;
}

void linearize(const DynamicsModel& model, const State& x, const Control& u,
               int mode, Eigen::MatrixXd* fx, Eigen::MatrixXd* fu) {
  model.jacobians(x, u, mode, fx, fu);
}

}  // namespace hddp
