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

#ifndef HDDP_SERIALIZATION_HPP_
#define HDDP_SERIALIZATION_HPP_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hddp/ablation.hpp"
#include "hddp/dynamics.hpp"
#include "hddp/hybrid.hpp"
#include "hddp/pushing.hpp"
#include "hddp/sim.hpp"
#include "hddp/types.hpp"

namespace hddp {

// Trajectory document: arrays "states", "inputs", "modes", "dt" (per-step
// seconds). The model supplies step durations for variable-timestep inputs.
nlohmann::json trajectory_to_json(const Trajectory& traj,
                                  const DynamicsModel& model);
Trajectory trajectory_from_json(const nlohmann::json& doc);

nlohmann::json law_to_json(const ControlLaw& law);
ControlLaw law_from_json(const nlohmann::json& doc);

nlohmann::json plan_to_json(const HybridPlan& plan, const DynamicsModel& model);
HybridPlan plan_from_json(const nlohmann::json& doc);

nlohmann::json sim_result_to_json(const SimResult& result,
                                  const DynamicsModel& model);

// One row per sweep cell: grid coordinates, sample count, success rate, and
// planning-time statistics split into tree/final phases.
std::string ablation_csv(const std::vector<AblationCell>& cells);

// Columns: step,x,y,switch_reset.
std::string pusher_path_csv(const std::vector<PusherPathPoint>& path);

}  // namespace hddp

#endif  // HDDP_SERIALIZATION_HPP_
