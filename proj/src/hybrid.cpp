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

#include "hddp/hybrid.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "hddp/qp.hpp"

namespace hddp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void validate(const DynamicsModel& model, const HybridConfig& config) {
  if (config.enabled_modes.empty()) {
    throw std::invalid_argument("plan: no modes enabled");
  }
  const auto all = model.modes();
  for (int m : config.enabled_modes) {
    if (std::find(all.begin(), all.end(), m) == all.end()) {
      throw std::invalid_argument("plan: enabled mode " + std::to_string(m) +
                                  " not in the model's mode set");
    }
  }
  if (config.max_switches < 0) {
    throw std::invalid_argument("plan: max_switches must be >= 0");
  }
  if (config.horizon < config.max_switches + 1) {
    throw std::invalid_argument("plan: horizon too short for switch budget");
  }
  if (config.tree_iterations < 0 || config.final_iterations < 0) {
    throw std::invalid_argument("plan: iteration caps must be >= 0");
  }
}

// Equilibrium-seeded initialization: each segment starts from the state the
// previous segment reaches when held at its equilibrium input. Returns
// false with `reason` set when some segment's mode cannot hold its entry
// state (the prune rule).
bool initialize_leaf(const DynamicsModel& model, const State& x0,
                     const ModeSequence& seq, int horizon,
                     std::vector<Control>* inputs, std::string* reason) {
  std::vector<int> bounds;
  bounds.push_back(0);
  for (int s : seq.switch_steps) bounds.push_back(s);
  bounds.push_back(horizon);

  inputs->assign(horizon, Control());
  State x = x0;
  for (size_t j = 0; j + 1 < bounds.size(); ++j) {
    const int mode = seq.modes[j];
    const auto u_eq = static_equilibrium_input(model, x, mode);
    if (!u_eq) {
      std::ostringstream oss;
      oss << "mode " << mode << " cannot hold equilibrium at step "
          << bounds[j];
      *reason = oss.str();
      return false;
    }
    for (int k = bounds[j]; k < bounds[j + 1]; ++k) {
      (*inputs)[k] = *u_eq;
      x = model.step(x, *u_eq, mode);
    }
  }
  return true;
}

}  // namespace

std::vector<int> switch_times(int horizon, int n_switches) {
  if (horizon < n_switches + 1) {
    throw std::invalid_argument("switch_times: horizon too short");
  }
  std::vector<int> steps;
  steps.reserve(n_switches);
  for (int j = 1; j <= n_switches; ++j) {
    steps.push_back(static_cast<int>(
        std::lround(static_cast<double>(j) * horizon / (n_switches + 1))));
  }
  for (size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] <= (i == 0 ? 0 : steps[i - 1]) || steps[i] >= horizon) {
      throw std::invalid_argument("switch_times: degenerate placement");
    }
  }
  return steps;
}

std::vector<std::vector<int>> enumerate_sequences(
    const std::vector<int>& enabled, int n_switches) {
  if (enabled.empty()) return {};
  std::vector<int> sorted = enabled;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() == 1) return {{sorted[0]}};

  std::vector<std::vector<int>> out;
  std::vector<int> current;
  const int length = n_switches + 1;
  // Depth-first in ascending mode order yields lexicographic output.
  auto extend = [&](auto&& self) -> void {
    if (static_cast<int>(current.size()) == length) {
      out.push_back(current);
      return;
    }
    for (int m : sorted) {
      if (!current.empty() && current.back() == m) continue;
      current.push_back(m);
      self(self);
      current.pop_back();
    }
  };
  extend(extend);
  return out;
}

std::optional<Control> static_equilibrium_input(const DynamicsModel& model,
                                                const State& x, int mode) {
  const State rest = model.equilibrium_state(x);
  const InputConstraintSet cons = model.constraints(rest, mode);
  Eigen::MatrixXd c;
  Eigen::VectorXd d;
  model.equilibrium_system(rest, mode, &c, &d);

  const int m = model.input_dim();
  QuadraticProgram qp;
  qp.H = 2.0 * Eigen::MatrixXd::Identity(m, m);
  qp.g = Eigen::VectorXd::Zero(m);
  qp.A = cons.A;
  qp.b = cons.b;
  qp.G.resize(c.rows() + cons.G.rows(), m);
  qp.h.resize(c.rows() + cons.G.rows());
  if (c.rows() > 0) {
    qp.G.topRows(c.rows()) = c;
    qp.h.head(c.rows()) = d;
  }
  if (cons.G.rows() > 0) {
    qp.G.bottomRows(cons.G.rows()) = cons.G;
    qp.h.tail(cons.G.rows()) = cons.h;
  }
  const QPSolution sol = solve_qp(qp);
  if (sol.status != QPStatus::kOptimal) return std::nullopt;
  return sol.z;
}

bool prune(const DynamicsModel& model, const ModeSequence& sequence,
           const std::vector<State>& x_at_switch) {
  if (sequence.switch_steps.size() != x_at_switch.size()) {
    throw std::invalid_argument("prune: one state per switch required");
  }
  for (size_t i = 0; i < x_at_switch.size(); ++i) {
    const int incoming = sequence.modes[i + 1];
    if (!static_equilibrium_input(model, x_at_switch[i], incoming)) {
      return true;
    }
  }
  return false;
}

std::vector<int> expand_mode_schedule(const ModeSequence& sequence,
                                      int horizon) {
  std::vector<int> schedule(horizon);
  size_t seg = 0;
  for (int k = 0; k < horizon; ++k) {
    while (seg < sequence.switch_steps.size() &&
           k >= sequence.switch_steps[seg]) {
      ++seg;
    }
    schedule[k] = sequence.modes[seg];
  }
  return schedule;
}

HybridPlan plan(const DynamicsModel& model, const QuadraticCost& cost,
                const State& x0, const HybridConfig& config) {
  validate(model, config);
  const auto t_tree = Clock::now();

  // Candidate sequences for every switch count within the budget, ordered by
  // count and then lexicographically.
  std::vector<ModeSequence> candidates;
  const int max_switches =
      config.enabled_modes.size() == 1 ? 0 : config.max_switches;
  for (int ns = 0; ns <= max_switches; ++ns) {
    const auto steps = switch_times(config.horizon, ns);
    for (auto& modes : enumerate_sequences(config.enabled_modes, ns)) {
      candidates.push_back(ModeSequence{std::move(modes), steps});
    }
  }

  DDPConfig tree_cfg = config.ddp;
  tree_cfg.max_iterations = config.tree_iterations;

  std::vector<LeafCandidate> leaves(candidates.size());
  const auto run_leaf = [&](size_t i) {
    LeafCandidate& leaf = leaves[i];
    leaf.sequence = candidates[i];
    leaf.approx_cost = std::numeric_limits<double>::infinity();
    std::vector<Control> inputs;
    std::string reason;
    if (!initialize_leaf(model, x0, leaf.sequence, config.horizon, &inputs,
                         &reason)) {
      leaf.pruned = true;
      leaf.prune_reason = reason;
      return;
    }
    const auto schedule = expand_mode_schedule(leaf.sequence, config.horizon);
    try {
      DDPResult res = solve(model, cost, x0, inputs, schedule, tree_cfg);
      leaf.trajectory = std::move(res.traj);
      leaf.approx_cost = res.cost;
    } catch (const std::exception& e) {
      leaf.pruned = true;
      leaf.prune_reason = std::string("leaf solve failed: ") + e.what();
    }
  };

  const int workers =
      std::max(1, std::min<int>(config.workers,
                                static_cast<int>(candidates.size())));
  if (workers == 1) {
    for (size_t i = 0; i < candidates.size(); ++i) run_leaf(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < candidates.size();
             i = next.fetch_add(1)) {
          run_leaf(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  int best = -1;
  for (size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].pruned) continue;
    if (best < 0 || leaves[i].approx_cost < leaves[best].approx_cost) {
      best = static_cast<int>(i);
    }
  }
  const double tree_seconds = seconds_since(t_tree);

  if (best < 0) {
    std::ostringstream oss;
    oss << "plan: all " << leaves.size() << " mode sequences pruned:";
    for (const auto& leaf : leaves) {
      oss << "\n  [";
      for (size_t j = 0; j < leaf.sequence.modes.size(); ++j) {
        oss << (j ? " " : "") << leaf.sequence.modes[j];
      }
      oss << "] " << leaf.prune_reason;
    }
    throw PlanInfeasible(oss.str());
  }

  const auto t_final = Clock::now();
  DDPConfig final_cfg = config.ddp;
  final_cfg.max_iterations = config.final_iterations;
  const auto schedule =
      expand_mode_schedule(leaves[best].sequence, config.horizon);
  DDPResult res = solve(model, cost, x0, leaves[best].trajectory.inputs,
                        schedule, final_cfg);

  HybridPlan out;
  out.best = leaves[best].sequence;
  out.trajectory = std::move(res.traj);
  out.law = std::move(res.law);
  out.cost = res.cost;
  out.leaf_table = std::move(leaves);
  out.best_leaf_index = best;
  out.final_cost_log = std::move(res.cost_log);
  out.tree_seconds = tree_seconds;
  out.final_seconds = seconds_since(t_final);
  return out;
}

}  // namespace hddp
