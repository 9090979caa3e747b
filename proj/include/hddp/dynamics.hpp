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

#ifndef HDDP_DYNAMICS_HPP
#define HDDP_DYNAMICS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hddp/constraints.hpp"
#include "hddp/types.hpp"

namespace hddp {

// Discrete-time dynamics with a finite set of contact modes. Each mode has
// its own vector field and input-feasible set; the input dimension is the
// same across modes.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual std::string name() const = 0;
  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  virtual std::vector<int> modes() const = 0;

  virtual State step(const State& x, const Control& u, int mode) const = 0;

  // Jacobians of step() w.r.t. x and u. The default uses central finite
  // differences; models with analytic derivatives should override.
  virtual void jacobians(const State& x, const Control& u, int mode,
                         Eigen::MatrixXd* fx, Eigen::MatrixXd* fu) const;

  virtual InputConstraintSet constraints(const State& x, int mode) const = 0;

  // State coordinates that live on the circle (used for error wrapping).
  virtual std::vector<int> angle_state_indices() const { return {}; }

  // Rows C u = d that, together with constraints(), characterize inputs
  // holding the state at rest. Models without a meaningful notion return
  // zero rows. `x` is first mapped through equilibrium_state().
  virtual void equilibrium_system(const State& x, int mode, Eigen::MatrixXd* c,
                                  Eigen::VectorXd* d) const;

  // Nearest resting state (e.g. velocities zeroed). Identity by default.
  virtual State equilibrium_state(const State& x) const { return x; }

  // Physical duration of the interval covered by input u.
  virtual double step_duration(const Control& u) const = 0;
};

// Integrates the inputs/modes open loop from x0. Throws std::runtime_error
// naming the step index if a non-finite state is produced.
Trajectory rollout(const DynamicsModel& model, const State& x0,
                   const std::vector<Control>& inputs,
                   const std::vector<int>& modes);

// Jacobian pair of model.step at (x, u, mode).
void linearize(const DynamicsModel& model, const State& x, const Control& u,
               int mode, Eigen::MatrixXd* fx, Eigen::MatrixXd* fu);

}  // namespace hddp

#endif  // HDDP_DYNAMICS_HPP
