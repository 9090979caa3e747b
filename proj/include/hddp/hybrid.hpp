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

#ifndef HDDP_HYBRID_HPP
#define HDDP_HYBRID_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hddp/cost.hpp"
#include "hddp/ddp.hpp"
#include "hddp/dynamics.hpp"
#include "hddp/types.hpp"

namespace hddp {

struct HybridConfig {
  int max_switches = 1;            // switch budget, not an exact count
  std::vector<int> enabled_modes;  // subset of the model's mode set
  int horizon = 24;
  int tree_iterations = 10;   // DDP cap per leaf during tree generation
  int final_iterations = 100; // DDP cap for the winning leaf
  int workers = 1;
  DDPConfig ddp;  // shared solver settings (iteration caps come from above)
};

struct ModeSequence {
  std::vector<int> modes;         // one per segment
  std::vector<int> switch_steps;  // strictly increasing, inside (0, N)

  int switches() const { return static_cast<int>(switch_steps.size()); }
};

struct LeafCandidate {
  ModeSequence sequence;
  Trajectory trajectory;  // tree-phase solution; empty when pruned
  double approx_cost = 0.0;
  bool pruned = false;
  std::string prune_reason;
};

struct HybridPlan {
  ModeSequence best;
  Trajectory trajectory;  // final-solve result
  ControlLaw law;
  double cost = 0.0;
  std::vector<LeafCandidate> leaf_table;
  int best_leaf_index = -1;
  std::vector<double> final_cost_log;  // per-iteration costs, final solve
  double tree_seconds = 0.0;
  double final_seconds = 0.0;
};

// Raised by plan() when every candidate sequence is pruned; the message
// lists the per-leaf prune reasons.
class PlanInfeasible : public std::runtime_error {
 public:
  explicit PlanInfeasible(const std::string& what)
      : std::runtime_error(what) {}
};

// Evenly distributed interior switch steps: {round(j*N/(n_switches+1))}.
std::vector<int> switch_times(int horizon, int n_switches);

// All mode lists of length n_switches+1 over `enabled` without consecutive
// repeats, in lexicographic order (count M*(M-1)^n_switches; a single
// enabled mode yields just the switchless list).
std::vector<std::vector<int>> enumerate_sequences(
    const std::vector<int>& enabled, int n_switches);

// Minimum-norm input holding the state at rest under the mode's constraint
// set, or nullopt when no such input exists.
std::optional<Control> static_equilibrium_input(const DynamicsModel& model,
                                                const State& x, int mode);

// True iff the incoming mode after any switch cannot hold the object still
// at the corresponding switch state.
bool prune(const DynamicsModel& model, const ModeSequence& sequence,
           const std::vector<State>& x_at_switch);

// Per-step mode schedule induced by a sequence over `horizon` steps.
std::vector<int> expand_mode_schedule(const ModeSequence& sequence,
                                      int horizon);

// Tree search over mode sequences with all switch counts up to the budget:
// equilibrium-seeded leaf initialization, pruning, capped leaf solves, and a
// full solve of the winner. Leaves run on `workers` threads; the leaf table
// order (switch count, then lexicographic) is independent of scheduling and
// breaks cost ties toward the earlier sequence.
HybridPlan plan(const DynamicsModel& model, const QuadraticCost& cost,
                const State& x0, const HybridConfig& config);

}  // namespace hddp

#endif  // HDDP_HYBRID_HPP
