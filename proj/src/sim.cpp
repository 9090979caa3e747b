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

#include "hddp/sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "hddp/qp.hpp"

namespace hddp {
namespace {

constexpr double kDivergedStateNorm = 1e8;

Eigen::VectorXd wrapped_error(const State& x, const State& goal,
                              const std::vector<int>& angle_indices) {
  Eigen::VectorXd err = x - goal;
  for (int idx : angle_indices) err(idx) = wrap_angle(err(idx));
  return err;
}

}  // namespace

bool success(const State& final_state, const State& goal,
             const SuccessCriteria& criteria,
             const std::vector<int>& angle_indices) {
  if (final_state.size() != goal.size() ||
      criteria.thresholds.size() != goal.size()) {
    throw std::invalid_argument("success: dimension mismatch");
  }
  const Eigen::VectorXd err = wrapped_error(final_state, goal, angle_indices);
  return (err.cwiseAbs().array() < criteria.thresholds.array()).all();
}

SimResult simulate_closed_loop(const DynamicsModel& model,
                               const HybridPlan& plan,
                               const NoiseModel& noise,
                               const SuccessCriteria& criteria,
                               const State& goal, bool feedback) {
  const Trajectory& nominal = plan.trajectory;
  const int n_steps = nominal.horizon();
  if (feedback &&
      static_cast<int>(plan.law.feedback.size()) != n_steps) {
    throw std::invalid_argument("simulate: law length must match horizon");
  }
  const int n = model.state_dim();
  const int m = model.input_dim();
  if (noise.state_sd.size() != n) {
    throw std::invalid_argument("simulate: state noise dimension mismatch");
  }
  const bool input_noise = noise.input_sd.size() > 0;
  if (input_noise && noise.input_sd.size() != m) {
    throw std::invalid_argument("simulate: input noise dimension mismatch");
  }
  const auto angle_indices = model.angle_state_indices();

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SimResult result;
  result.executed.states.push_back(nominal.states[0]);
  result.executed.modes = nominal.modes;

  for (int k = 0; k < n_steps; ++k) {
    const State& x = result.executed.states.back();
    Eigen::VectorXd u = nominal.inputs[k];
    if (feedback) {
      Eigen::VectorXd dx = x - nominal.states[k];
      for (int idx : angle_indices) dx(idx) = wrap_angle(dx(idx));
      u += plan.law.feedback[k] * dx;
    }
    if (input_noise) {
      for (int i = 0; i < m; ++i) u(i) += noise.input_sd(i) * gauss(rng);
    }
    u = project_feasible(u, model.constraints(x, nominal.modes[k]));

    State next = model.step(x, u, nominal.modes[k]);
    for (int i = 0; i < n; ++i) next(i) += noise.state_sd(i) * gauss(rng);

    if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kDivergedStateNorm) {
      result.diverged_step = k + 1;
      result.executed.inputs.push_back(u);
      result.executed.modes.resize(result.executed.inputs.size());
      result.terminal_error =
          wrapped_error(result.executed.states.back(), goal, angle_indices);
      result.success = false;
      return result;
    }
    result.executed.inputs.push_back(u);
    result.executed.states.push_back(std::move(next));
  }

  result.terminal_error =
      wrapped_error(result.executed.states.back(), goal, angle_indices);
  result.success =
      success(result.executed.states.back(), goal, criteria, angle_indices);
  return result;
}

std::vector<PusherPathPoint> pusher_positions(const Trajectory& traj,
                                              const PushingParams& params) {
  std::vector<PusherPathPoint> path;
  if (traj.states.empty() || traj.horizon() == 0) return path;

  auto contact_world = [&](const State& x, int mode) -> Eigen::Vector2d {
    return x.head<2>() +
           rotation2(x(2)) * pushing_contact_point(mode, params);
  };

  Eigen::Vector2d pos = contact_world(traj.states[0], traj.modes[0]);
  path.push_back({0, pos, false});
  for (int k = 0; k < traj.horizon(); ++k) {
    if (k > 0 && traj.modes[k] != traj.modes[k - 1]) {
      pos = contact_world(traj.states[k], traj.modes[k]);
      path.push_back({k, pos, true});
    }
    const int mode = traj.modes[k];
    // Exact displacement of the sticking contact point over the step. This
    // telescopes the first-order force-to-velocity map through the discrete
    // object motion, so the path cannot drift off the contact point the way
    // a plain Euler update of the velocity map would at coarse time steps.
    pos += contact_world(traj.states[k + 1], mode) -
           contact_world(traj.states[k], mode);
    path.push_back({k + 1, pos, false});
  }
  return path;
}

}  // namespace hddp
