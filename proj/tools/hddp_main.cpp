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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "hddp/ablation.hpp"
#include "hddp/config.hpp"
#include "hddp/hybrid.hpp"
#include "hddp/serialization.hpp"
#include "hddp/sim.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hddp;

std::string padded(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", i);
  return std::string(buf);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

std::string sequence_to_string(const ModeSequence& seq) {
  std::string out = "modes [";
  for (size_t i = 0; i < seq.modes.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(seq.modes[i]);
  }
  out += "] switches [";
  for (size_t i = 0; i < seq.switch_steps.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(seq.switch_steps[i]);
  }
  out += "]";
  return out;
}

void print_cost_log(const std::vector<double>& log) {
  for (size_t i = 0; i < log.size(); ++i) {
    std::printf("    iter %2zu  cost %.9g\n", i, log[i]);
  }
}

int cmd_plan(const ExperimentConfig& cfg, bool verbose) {
  const auto model = make_model(cfg);
  const QuadraticCost cost = make_cost(cfg, *model);
  bool any_pruned_out = false;
  for (size_t i = 0; i < cfg.initial_states.size(); ++i) {
    const State& x0 = cfg.initial_states[i];
    std::printf("[%zu/%zu] x0 = (", i + 1, cfg.initial_states.size());
    for (Eigen::Index d = 0; d < x0.size(); ++d) {
      std::printf("%s%.4g", d ? ", " : "", x0(d));
    }
    std::printf(")\n");
    try {
      const HybridPlan result = plan(*model, cost, x0, cfg.planner);
      const bool ok = success(result.trajectory.states.back(), cost.goal(),
                              cfg.criteria, model->angle_state_indices());
      std::printf("  best %s  cost %.6g  tree %.3fs  final %.3fs  %s\n",
                  sequence_to_string(result.best).c_str(), result.cost,
                  result.tree_seconds, result.final_seconds,
                  ok ? "meets criteria" : "MISSES criteria");
      if (verbose) {
        print_cost_log(result.final_cost_log);
        for (const auto& leaf : result.leaf_table) {
          std::printf("    leaf %s  %s\n",
                      sequence_to_string(leaf.sequence).c_str(),
                      leaf.pruned ? ("pruned: " + leaf.prune_reason).c_str()
                                  : ("cost " + std::to_string(leaf.approx_cost))
                                        .c_str());
        }
      }
      write_json(fs::path(cfg.out_dir) / ("plan_" + padded(static_cast<int>(i)) + ".json"),
                 plan_to_json(result, *model));
    } catch (const PlanInfeasible& e) {
      any_pruned_out = true;
      std::printf("  all sequences pruned\n");
      if (verbose) std::printf("%s\n", e.what());
    }
  }
  return any_pruned_out ? 2 : 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& plan_path,
                 bool verbose) {
  const auto model = make_model(cfg);
  const QuadraticCost cost = make_cost(cfg, *model);

  HybridPlan the_plan;
  if (!plan_path.empty()) {
    std::ifstream in(plan_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot open plan '%s'\n", plan_path.c_str());
      return 1;
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
      if (doc.value("model", std::string()) != model->name()) {
        std::fprintf(stderr, "error: plan model '%s' does not match config model '%s'\n",
                     doc.value("model", std::string()).c_str(),
                     model->name().c_str());
        return 1;
      }
      the_plan = plan_from_json(doc);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: bad plan document: %s\n", e.what());
      return 1;
    }
    if (the_plan.trajectory.states.empty() ||
        the_plan.trajectory.states[0].size() != model->state_dim()) {
      std::fprintf(stderr, "error: plan state dimension does not match model\n");
      return 1;
    }
  } else {
    try {
      the_plan = plan(*model, cost, cfg.initial_states[0], cfg.planner);
    } catch (const PlanInfeasible&) {
      std::printf("all sequences pruned; nothing to simulate\n");
      return 2;
    }
  }

  const int runs = cfg.simulation.runs;
  std::vector<SimResult> closed;
  std::vector<SimResult> open;
  for (int r = 0; r < runs; ++r) {
    NoiseModel noise = cfg.noise;
    noise.seed = cfg.noise.seed + static_cast<std::uint64_t>(r);
    const SimResult res = simulate_closed_loop(*model, the_plan, noise,
                                               cfg.criteria, cost.goal(), true);
    closed.push_back(res);
    write_json(fs::path(cfg.out_dir) / ("sim_" + padded(r) + ".json"),
               sim_result_to_json(res, *model));
    if (model->name() == "pushing") {
      write_text(
          fs::path(cfg.out_dir) / ("pusher_" + padded(r) + ".csv"),
          pusher_path_csv(pusher_positions(res.executed, cfg.pushing)));
    }
    std::printf("run %d (closed loop): success=%s terminal error = (", r,
                res.success ? "true" : "false");
    for (Eigen::Index d = 0; d < res.terminal_error.size(); ++d) {
      std::printf("%s%.6g", d ? ", " : "", res.terminal_error(d));
    }
    std::printf(")\n");
    if (cfg.simulation.compare_open_loop) {
      const SimResult ol = simulate_closed_loop(*model, the_plan, noise,
                                                cfg.criteria, cost.goal(), false);
      open.push_back(ol);
      write_json(fs::path(cfg.out_dir) / ("sim_openloop_" + padded(r) + ".json"),
                 sim_result_to_json(ol, *model));
      if (verbose) {
        std::printf("run %d (open loop):  success=%s\n", r,
                    ol.success ? "true" : "false");
      }
    }
  }

  if (cfg.simulation.compare_open_loop) {
    const auto column_sd = [](const std::vector<SimResult>& rs, int d) {
      double mean = 0.0;
      for (const auto& r : rs) mean += r.terminal_error(d);
      mean /= static_cast<double>(rs.size());
      double acc = 0.0;
      for (const auto& r : rs) {
        acc += (r.terminal_error(d) - mean) * (r.terminal_error(d) - mean);
      }
      return rs.size() > 1 ? std::sqrt(acc / static_cast<double>(rs.size() - 1))
                           : 0.0;
    };
    nlohmann::json summary;
    std::printf("\nterminal-error s.d. over %d runs:\n", runs);
    std::printf("%-12s %-14s %-14s\n", "coordinate", "open-loop", "closed-loop");
    nlohmann::json sd_open = nlohmann::json::array();
    nlohmann::json sd_closed = nlohmann::json::array();
    for (int d = 0; d < model->state_dim(); ++d) {
      const double so = column_sd(open, d);
      const double sc = column_sd(closed, d);
      sd_open.push_back(so);
      sd_closed.push_back(sc);
      std::printf("%-12d %-14.6g %-14.6g\n", d, so, sc);
    }
    summary["runs"] = runs;
    summary["sd_open_loop"] = sd_open;
    summary["sd_closed_loop"] = sd_closed;
    write_json(fs::path(cfg.out_dir) / "comparison_summary.json", summary);
  }
  return 0;
}

int cmd_ablate(const ExperimentConfig& cfg, int workers, bool verbose) {
  if (!cfg.has_ablation) {
    std::fprintf(stderr, "error: config.ablation: required for ablate\n");
    return 1;
  }
  const QuadraticCost cost = make_cost(cfg, *make_model(cfg));

  std::vector<AblationInstance> instances;
  if (cfg.model_kind == "pivoting" && !cfg.aspect_ratios.empty()) {
    for (double ratio : cfg.aspect_ratios) {
      PivotingParams params = cfg.pivoting;
      params.width = ratio * params.height;
      auto model = std::make_shared<PivotingModel>(params);
      for (const auto& x0 : cfg.initial_states) {
        instances.push_back(AblationInstance{model, x0});
      }
    }
  } else {
    auto model = make_model(cfg);
    for (const auto& x0 : cfg.initial_states) {
      instances.push_back(AblationInstance{model, x0});
    }
  }

  const auto cells = ablation_sweep(instances, cost, cfg.planner, cfg.ablation,
                                    cfg.criteria, workers);
  write_text(fs::path(cfg.out_dir) / "ablation.csv", ablation_csv(cells));

  std::printf("success rate by %s (rows) x contact-set size (columns):\n",
              cfg.ablation.axis.c_str());
  std::printf("%-10s", "");
  for (int s : cfg.ablation.sizes) std::printf("%-10d", s);
  std::printf("\n");
  for (int value : cfg.ablation.values) {
    std::printf("%-10d", value);
    for (int size : cfg.ablation.sizes) {
      for (const auto& cell : cells) {
        if (cell.axis_value == value && cell.contact_size == size) {
          std::printf("%-10.3f", cell.success_rate);
        }
      }
    }
    std::printf("\n");
  }
  if (verbose) {
    for (const auto& cell : cells) {
      std::printf("cell axis=%d size=%d  n=%d  rate=%.3f  tree %.3f+/-%.3fs  "
                  "final %.3f+/-%.3fs\n",
                  cell.axis_value, cell.contact_size, cell.n,
                  cell.success_rate, cell.tree_mean, cell.tree_sd,
                  cell.final_mean, cell.final_sd);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid trajectory optimization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string plan_path;
  int seed = -1;
  int workers = 0;
  bool verbose = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--seed", seed, "override the config noise seed");
    cmd->add_option("--workers", workers,
                    "worker threads (default: config, else hardware)");
    cmd->add_option("--out", out_dir, "output directory (default: out)");
    cmd->add_flag("--verbose", verbose, "per-iteration and per-leaf detail");
  };

  CLI::App* c_plan = app.add_subcommand("plan", "plan from each initial state");
  add_common(c_plan);
  CLI::App* c_sim =
      app.add_subcommand("simulate", "execute a plan under noise");
  add_common(c_sim);
  c_sim->add_option("--plan", plan_path,
                    "plan document (default: plan internally)");
  CLI::App* c_abl = app.add_subcommand("ablate", "run the configured sweep");
  add_common(c_abl);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (seed >= 0) cfg.noise.seed = static_cast<std::uint64_t>(seed);
    int effective_workers = workers > 0 ? workers : cfg.planner.workers;
    if (effective_workers <= 0) {
      effective_workers =
          std::max(1u, std::thread::hardware_concurrency());
    }
    cfg.planner.workers = effective_workers;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (cfg.out_dir.empty()) cfg.out_dir = "out";
    fs::create_directories(cfg.out_dir);

    if (c_plan->parsed()) return cmd_plan(cfg, verbose);
    if (c_sim->parsed()) return cmd_simulate(cfg, plan_path, verbose);
    return cmd_ablate(cfg, effective_workers, verbose);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
