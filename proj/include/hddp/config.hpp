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

#ifndef HDDP_CONFIG_HPP_
#define HDDP_CONFIG_HPP_

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hddp/ablation.hpp"
#include "hddp/cost.hpp"
#include "hddp/dynamics.hpp"
#include "hddp/hybrid.hpp"
#include "hddp/pivoting.hpp"
#include "hddp/pushing.hpp"
#include "hddp/sim.hpp"

namespace hddp {

// Thrown on malformed configs; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SimulationSpec {
  int runs = 1;                    // independent noise seeds per command
  bool compare_open_loop = false;  // additionally run feedback-off seeds
};

// One experiment document: model selection and parameters, planner settings,
// quadratic cost, initial conditions, execution noise, scoring thresholds,
// and optional sweep/simulation sections. All angles in the document are
// radians unless the key is suffixed _deg.
struct ExperimentConfig {
  std::string model_kind;  // "pushing" | "pivoting"
  PushingParams pushing;
  PivotingParams pivoting;
  HybridConfig planner;
  Eigen::VectorXd q;
  Eigen::VectorXd r;
  Eigen::VectorXd qn;
  Eigen::VectorXd goal;
  std::vector<State> initial_states;
  NoiseModel noise;
  SuccessCriteria criteria;
  SimulationSpec simulation;
  bool has_ablation = false;
  AblationSpec ablation;
  std::vector<double> aspect_ratios;  // pivoting sweeps: width = ratio·height
  std::string out_dir;                // optional; CLI flag takes precedence
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

std::shared_ptr<DynamicsModel> make_model(const ExperimentConfig& cfg);
QuadraticCost make_cost(const ExperimentConfig& cfg,
                        const DynamicsModel& model);

}  // namespace hddp

#endif  // HDDP_CONFIG_HPP_
