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

#ifndef HDDP_SIM_HPP
#define HDDP_SIM_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hddp/hybrid.hpp"
#include "hddp/pushing.hpp"
#include "hddp/types.hpp"

namespace hddp {

// Per-coordinate absolute thresholds on the wrapped terminal error.
struct SuccessCriteria {
  Eigen::VectorXd thresholds;
};

// Additive zero-mean Gaussian disturbances, applied per step: input noise
// before projection (skipped when input_sd is empty), state noise after
// stepping. Draw order is fixed so a seed fully determines the run.
struct NoiseModel {
  Eigen::VectorXd state_sd;
  Eigen::VectorXd input_sd;
  std::uint64_t seed = 0;
};

struct SimResult {
  Trajectory executed;            // applied (post-projection) inputs
  Eigen::VectorXd terminal_error; // goal-relative, angles wrapped
  bool success = false;
  int diverged_step = -1;         // -1 when the run stayed finite
};

bool success(const State& final_state, const State& goal,
             const SuccessCriteria& criteria,
             const std::vector<int>& angle_indices);

// Executes the plan under the per-step linear feedback law: the applied
// input is project_feasible(nominal + K * dx) at the executed state, with dx
// wrapped on angular coordinates. `feedback` off replays the nominal inputs
// open loop (noise draws are identical either way).
SimResult simulate_closed_loop(const DynamicsModel& model,
                               const HybridPlan& plan,
                               const NoiseModel& noise,
                               const SuccessCriteria& criteria,
                               const State& goal, bool feedback = true);

// Pusher reference path recovered from the plan: the active contact point's
// displacement integrated step by step, re-anchored at contact switches.
struct PusherPathPoint {
  int step;
  Eigen::Vector2d position;
  bool switch_reset;
};

std::vector<PusherPathPoint> pusher_positions(const Trajectory& traj,
                                              const PushingParams& params);

}  // namespace hddp

#endif  // HDDP_SIM_HPP
