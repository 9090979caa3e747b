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

#ifndef HDDP_ABLATION_HPP
#define HDDP_ABLATION_HPP

#include <memory>
#include <string>
#include <vector>

#include "hddp/hybrid.hpp"
#include "hddp/sim.hpp"

namespace hddp {

// One planning problem of the study: a model variant plus a start state.
struct AblationInstance {
  std::shared_ptr<const DynamicsModel> model;
  State x0;
};

// Sweep layout: one hyper-parameter axis crossed with enabled-contact set
// size. Every combination of `sizes[k]` contacts drawn from contact_pool is
// planned from every instance.
struct AblationSpec {
  std::string axis;  // "max_switches" | "tree_iterations" | "horizon"
  std::vector<int> values;
  std::vector<int> contact_pool;
  std::vector<int> sizes;
};

struct AblationCell {
  int axis_value = 0;
  int contact_size = 0;
  // Resolved planner coordinates of the cell.
  int max_switches = 0;
  int tree_iterations = 0;
  int horizon = 0;
  int n = 0;  // combinations x instances
  int successes = 0;
  double success_rate = 0.0;
  // Timing statistics over the plans that completed (failed plans count
  // toward n but contribute no timing sample).
  double tree_mean = 0.0;
  double tree_sd = 0.0;
  double final_mean = 0.0;
  double final_sd = 0.0;
};

// Runs plan() for every (axis value, contact combination, instance) job and
// aggregates one cell per (axis value, contact size). A plan is successful
// when it exists and its terminal state meets the criteria; pruned-out or
// failed plans are scored unsuccessful and never abort the sweep. Jobs run
// on `workers` threads; aggregation order is fixed by the grid.
std::vector<AblationCell> ablation_sweep(
    const std::vector<AblationInstance>& instances, const QuadraticCost& cost,
    const HybridConfig& base, const AblationSpec& spec,
    const SuccessCriteria& criteria, int workers = 1);

// All size-k subsets of pool, ascending lexicographic.
std::vector<std::vector<int>> contact_combinations(
    const std::vector<int>& pool, int k);

}  // namespace hddp

#endif  // HDDP_ABLATION_HPP
