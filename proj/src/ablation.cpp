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

#include "hddp/ablation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace hddp {
namespace {

struct Job {
  size_t cell = 0;
  std::vector<int> contacts;
  size_t instance = 0;
};

struct JobResult {
  bool planned = false;
  bool succeeded = false;
  double tree_seconds = 0.0;
  double final_seconds = 0.0;
};

void apply_axis(HybridConfig* cfg, const std::string& axis, int value) {
  if (axis == "max_switches") {
    cfg->max_switches = value;
  } else if (axis == "tree_iterations") {
    cfg->tree_iterations = value;
  } else if (axis == "horizon") {
    cfg->horizon = value;
  } else {
    throw std::invalid_argument("ablation: unknown axis '" + axis + "'");
  }
}

void mean_sd(const std::vector<double>& xs, double* mean, double* sd) {
  *mean = 0.0;
  *sd = 0.0;
  if (xs.empty()) return;
  for (double x : xs) *mean += x;
  *mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  double acc = 0.0;
  for (double x : xs) acc += (x - *mean) * (x - *mean);
  *sd = std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<std::vector<int>> contact_combinations(
    const std::vector<int>& pool, int k) {
  std::vector<int> sorted = pool;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<int>> out;
  if (k < 0 || k > static_cast<int>(sorted.size())) return out;
  std::vector<int> idx(k);
  std::vector<int> combo(k);
  // Standard lexicographic index walking.
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    for (int i = 0; i < k; ++i) combo[i] = sorted[idx[i]];
    out.push_back(combo);
    int i = k - 1;
    while (i >= 0 &&
           idx[i] == static_cast<int>(sorted.size()) - k + i) {
      --i;
    }
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<AblationCell> ablation_sweep(
    const std::vector<AblationInstance>& instances, const QuadraticCost& cost,
    const HybridConfig& base, const AblationSpec& spec,
    const SuccessCriteria& criteria, int workers) {
  if (instances.empty() || spec.values.empty() || spec.sizes.empty()) {
    throw std::invalid_argument("ablation: empty grid");
  }

  std::vector<AblationCell> cells;
  std::vector<Job> jobs;
  for (int value : spec.values) {
    for (int size : spec.sizes) {
      AblationCell cell;
      cell.axis_value = value;
      cell.contact_size = size;
      HybridConfig cfg = base;
      apply_axis(&cfg, spec.axis, value);
      cell.max_switches = cfg.max_switches;
      cell.tree_iterations = cfg.tree_iterations;
      cell.horizon = cfg.horizon;
      const size_t cell_index = cells.size();
      for (const auto& combo : contact_combinations(spec.contact_pool, size)) {
        for (size_t i = 0; i < instances.size(); ++i) {
          jobs.push_back(Job{cell_index, combo, i});
        }
      }
      cells.push_back(cell);
    }
  }

  std::vector<JobResult> results(jobs.size());
  const auto run_job = [&](size_t j) {
    const Job& job = jobs[j];
    HybridConfig cfg = base;
    apply_axis(&cfg, spec.axis, cells[job.cell].axis_value);
    cfg.enabled_modes = job.contacts;
    cfg.workers = 1;  // parallelism lives at the job level here
    const AblationInstance& inst = instances[job.instance];
    JobResult& res = results[j];
    try {
      const HybridPlan plan_result =
          plan(*inst.model, cost, inst.x0, cfg);
      res.planned = true;
      res.tree_seconds = plan_result.tree_seconds;
      res.final_seconds = plan_result.final_seconds;
      res.succeeded = success(plan_result.trajectory.states.back(),
                              cost.goal(), criteria,
                              inst.model->angle_state_indices());
    } catch (const std::exception&) {
      res.planned = false;
      res.succeeded = false;
    }
  };

  const int n_workers =
      std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (n_workers == 1) {
    for (size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (size_t j = next.fetch_add(1); j < jobs.size();
             j = next.fetch_add(1)) {
          run_job(j);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<std::vector<double>> tree_times(cells.size());
  std::vector<std::vector<double>> final_times(cells.size());
  for (size_t j = 0; j < jobs.size(); ++j) {
    AblationCell& cell = cells[jobs[j].cell];
    ++cell.n;
    if (results[j].succeeded) ++cell.successes;
    if (results[j].planned) {
      tree_times[jobs[j].cell].push_back(results[j].tree_seconds);
      final_times[jobs[j].cell].push_back(results[j].final_seconds);
    }
  }
  for (size_t c = 0; c < cells.size(); ++c) {
    cells[c].success_rate =
        cells[c].n > 0
            ? static_cast<double>(cells[c].successes) / cells[c].n
            : 0.0;
    mean_sd(tree_times[c], &cells[c].tree_mean, &cells[c].tree_sd);
    mean_sd(final_times[c], &cells[c].final_mean, &cells[c].final_sd);
  }
  return cells;
}

}  // namespace hddp
