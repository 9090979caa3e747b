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

#include "hddp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace hddp {
namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
}

// Typo guard: every recognized sub-document lists its legal keys.
void check_keys(const json& obj, const std::string& ctx,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (allowed.find(it.key()) == allowed.end()) {
      throw ConfigError(ctx + "." + it.key() + ": unknown field");
    }
  }
}

double num_field(const json& obj, const std::string& ctx, const char* key,
                 double dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number()) {
    throw ConfigError(ctx + "." + key + ": expected a number");
  }
  return obj[key].get<double>();
}

int int_field(const json& obj, const std::string& ctx, const char* key,
              int dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number_integer()) {
    throw ConfigError(ctx + "." + key + ": expected an integer");
  }
  return obj[key].get<int>();
}

bool bool_field(const json& obj, const std::string& ctx, const char* key,
                bool dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_boolean()) {
    throw ConfigError(ctx + "." + key + ": expected a boolean");
  }
  return obj[key].get<bool>();
}

std::vector<double> num_list(const json& arr, const std::string& ctx) {
  if (!arr.is_array()) throw ConfigError(ctx + ": expected an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw ConfigError(ctx + ": expected numeric entries");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<int> int_list(const json& arr, const std::string& ctx) {
  if (!arr.is_array()) throw ConfigError(ctx + ": expected an array");
  std::vector<int> out;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) {
      throw ConfigError(ctx + ": expected integer entries");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

Eigen::VectorXd vec_field(const json& obj, const std::string& ctx,
                          const char* key, int expected,
                          const Eigen::VectorXd& dflt) {
  if (!obj.contains(key)) return dflt;
  const auto values = num_list(obj[key], ctx + "." + key);
  if (expected >= 0 && static_cast<int>(values.size()) != expected) {
    throw ConfigError(ctx + "." + key + ": expected " +
                      std::to_string(expected) + " entries, got " +
                      std::to_string(values.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

PushingParams parse_pushing(const json& obj) {
  const std::string ctx = "config.pushing";
  require_object(obj, ctx);
  check_keys(obj, ctx,
             {"half_side", "mass", "mu", "mu_ground", "n_max", "dt", "gravity",
              "variable_dt", "dt_min", "dt_max"});
  PushingParams p;
  p.half_side = num_field(obj, ctx, "half_side", p.half_side);
  p.mass = num_field(obj, ctx, "mass", p.mass);
  p.mu = num_field(obj, ctx, "mu", p.mu);
  p.mu_ground = num_field(obj, ctx, "mu_ground", p.mu_ground);
  p.n_max = num_field(obj, ctx, "n_max", p.n_max);
  p.dt = num_field(obj, ctx, "dt", p.dt);
  p.gravity = num_field(obj, ctx, "gravity", p.gravity);
  p.variable_dt = bool_field(obj, ctx, "variable_dt", p.variable_dt);
  p.dt_min = num_field(obj, ctx, "dt_min", p.dt_min);
  p.dt_max = num_field(obj, ctx, "dt_max", p.dt_max);
  if (p.half_side <= 0 || p.mass <= 0 || p.mu <= 0 || p.mu_ground <= 0 ||
      p.n_max <= 0 || p.dt <= 0) {
    throw ConfigError(ctx + ": geometry, friction, and timing must be > 0");
  }
  if (p.variable_dt && !(0 < p.dt_min && p.dt_min <= p.dt_max)) {
    throw ConfigError(ctx + ".dt_min/dt_max: need 0 < dt_min <= dt_max");
  }
  return p;
}

PivotingParams parse_pivoting(const json& obj) {
  const std::string ctx = "config.pivoting";
  require_object(obj, ctx);
  check_keys(obj, ctx,
             {"width", "height", "mass", "mu", "n_max", "dt", "gravity"});
  PivotingParams p;
  p.width = num_field(obj, ctx, "width", p.width);
  p.height = num_field(obj, ctx, "height", p.height);
  p.mass = num_field(obj, ctx, "mass", p.mass);
  p.mu = num_field(obj, ctx, "mu", p.mu);
  p.n_max = num_field(obj, ctx, "n_max", p.n_max);
  p.dt = num_field(obj, ctx, "dt", p.dt);
  p.gravity = num_field(obj, ctx, "gravity", p.gravity);
  if (p.width <= 0 || p.height <= 0 || p.mass <= 0 || p.mu <= 0 ||
      p.n_max <= 0 || p.dt <= 0) {
    throw ConfigError(ctx + ": all parameters must be > 0");
  }
  return p;
}

DDPConfig parse_ddp(const json& obj) {
  const std::string ctx = "config.planner.ddp";
  require_object(obj, ctx);
  check_keys(obj, ctx,
             {"max_iterations", "cost_tolerance", "feedforward_tolerance",
              "reg_init", "reg_growth", "reg_shrink", "reg_min", "reg_max",
              "num_alphas", "accept_ratio"});
  DDPConfig d;
  d.max_iterations = int_field(obj, ctx, "max_iterations", d.max_iterations);
  d.cost_tolerance = num_field(obj, ctx, "cost_tolerance", d.cost_tolerance);
  d.feedforward_tolerance =
      num_field(obj, ctx, "feedforward_tolerance", d.feedforward_tolerance);
  d.reg_init = num_field(obj, ctx, "reg_init", d.reg_init);
  d.reg_growth = num_field(obj, ctx, "reg_growth", d.reg_growth);
  d.reg_shrink = num_field(obj, ctx, "reg_shrink", d.reg_shrink);
  d.reg_min = num_field(obj, ctx, "reg_min", d.reg_min);
  d.reg_max = num_field(obj, ctx, "reg_max", d.reg_max);
  d.num_alphas = int_field(obj, ctx, "num_alphas", d.num_alphas);
  d.accept_ratio = num_field(obj, ctx, "accept_ratio", d.accept_ratio);
  return d;
}

std::string mode_list_string(const std::vector<int>& modes) {
  std::string out = "{";
  for (size_t i = 0; i < modes.size(); ++i) {
    out += (i ? ", " : "") + std::to_string(modes[i]);
  }
  return out + "}";
}

HybridConfig parse_planner(const json& obj, const std::vector<int>& valid) {
  const std::string ctx = "config.planner";
  require_object(obj, ctx);
  check_keys(obj, ctx,
             {"max_switches", "enabled_modes", "horizon", "tree_iterations",
              "final_iterations", "workers", "ddp"});
  HybridConfig c;
  c.max_switches = int_field(obj, ctx, "max_switches", c.max_switches);
  c.horizon = int_field(obj, ctx, "horizon", c.horizon);
  c.tree_iterations = int_field(obj, ctx, "tree_iterations", c.tree_iterations);
  c.final_iterations =
      int_field(obj, ctx, "final_iterations", c.final_iterations);
  c.workers = int_field(obj, ctx, "workers", 0);  // 0: let the CLI decide
  if (obj.contains("enabled_modes")) {
    c.enabled_modes = int_list(obj["enabled_modes"], ctx + ".enabled_modes");
  }
  if (obj.contains("ddp")) c.ddp = parse_ddp(obj["ddp"]);
  if (c.max_switches < 0) {
    throw ConfigError(ctx + ".max_switches: must be >= 0");
  }
  if (c.horizon < 1) throw ConfigError(ctx + ".horizon: must be >= 1");
  std::set<int> seen;
  for (int m : c.enabled_modes) {
    if (std::find(valid.begin(), valid.end(), m) == valid.end()) {
      throw ConfigError(ctx + ".enabled_modes: mode " + std::to_string(m) +
                        " not in the model's mode set " +
                        mode_list_string(valid));
    }
    if (!seen.insert(m).second) {
      throw ConfigError(ctx + ".enabled_modes: duplicate mode " +
                        std::to_string(m));
    }
  }
  return c;
}

AblationSpec parse_ablation(const json& obj, const std::vector<int>& valid) {
  const std::string ctx = "config.ablation";
  require_object(obj, ctx);
  check_keys(obj, ctx, {"axis", "values", "contact_pool", "sizes"});
  AblationSpec spec;
  if (!obj.contains("axis") || !obj["axis"].is_string()) {
    throw ConfigError(ctx + ".axis: expected a string");
  }
  spec.axis = obj["axis"].get<std::string>();
  if (spec.axis != "max_switches" && spec.axis != "tree_iterations" &&
      spec.axis != "horizon") {
    throw ConfigError(ctx + ".axis: must be one of max_switches, "
                      "tree_iterations, horizon");
  }
  if (!obj.contains("values")) throw ConfigError(ctx + ".values: required");
  spec.values = int_list(obj["values"], ctx + ".values");
  if (spec.values.empty()) throw ConfigError(ctx + ".values: must be nonempty");
  if (!obj.contains("contact_pool")) {
    throw ConfigError(ctx + ".contact_pool: required");
  }
  spec.contact_pool = int_list(obj["contact_pool"], ctx + ".contact_pool");
  for (int m : spec.contact_pool) {
    if (std::find(valid.begin(), valid.end(), m) == valid.end()) {
      throw ConfigError(ctx + ".contact_pool: mode " + std::to_string(m) +
                        " not in the model's mode set " +
                        mode_list_string(valid));
    }
  }
  if (!obj.contains("sizes")) throw ConfigError(ctx + ".sizes: required");
  spec.sizes = int_list(obj["sizes"], ctx + ".sizes");
  for (int s : spec.sizes) {
    if (s < 1 || s > static_cast<int>(spec.contact_pool.size())) {
      throw ConfigError(ctx + ".sizes: size " + std::to_string(s) +
                        " outside [1, pool size]");
    }
  }
  return spec;
}

// Paper-replication defaults, keyed by model kind. Angular entries are
// radians internally.
void apply_kind_defaults(ExperimentConfig* cfg) {
  if (cfg->model_kind == "pushing") {
    const int nu = cfg->pushing.variable_dt ? 3 : 2;
    cfg->q = Eigen::Vector3d(1.0, 1.0, 0.1);
    cfg->r = Eigen::VectorXd::Constant(nu, 0.5);
    if (cfg->pushing.variable_dt) cfg->r(2) = 0.01;
    cfg->qn = Eigen::Vector3d(200.0, 200.0, 20.0);
    cfg->goal = Eigen::Vector3d::Zero();
    cfg->criteria.thresholds =
        Eigen::Vector3d(0.05, 0.05, 5.0 * kDegToRad);
    cfg->noise.state_sd =
        Eigen::Vector3d(0.001, 0.001, 0.5 * kDegToRad);
  } else {
    cfg->q = Eigen::Vector2d(1.0, 0.1);
    cfg->r = Eigen::VectorXd::Constant(4, 0.01);
    cfg->qn = Eigen::Vector2d(100.0, 10.0);
    cfg->goal = Eigen::Vector2d(10.0 * kDegToRad, 0.0);
    cfg->criteria.thresholds =
        Eigen::Vector2d(10.0 * kDegToRad, 10.0 * kDegToRad);
    cfg->noise.state_sd =
        Eigen::Vector2d(0.2 * kDegToRad, 1.0 * kDegToRad);
  }
}

std::vector<State> parse_initial_grid(const json& obj,
                                      const std::string& kind) {
  const std::string ctx = "config.initial_grid";
  require_object(obj, ctx);
  std::vector<State> states;
  if (kind == "pushing") {
    check_keys(obj, ctx, {"x", "y", "theta_deg"});
    for (const char* key : {"x", "y", "theta_deg"}) {
      if (!obj.contains(key)) {
        throw ConfigError(ctx + "." + key + ": required for pushing grids");
      }
    }
    const auto xs = num_list(obj["x"], ctx + ".x");
    const auto ys = num_list(obj["y"], ctx + ".y");
    const auto ths = num_list(obj["theta_deg"], ctx + ".theta_deg");
    for (double x : xs) {
      for (double y : ys) {
        for (double th : ths) {
          states.push_back(Eigen::Vector3d(x, y, th * kDegToRad));
        }
      }
    }
  } else {
    check_keys(obj, ctx, {"theta_deg", "theta_dot"});
    if (!obj.contains("theta_deg")) {
      throw ConfigError(ctx + ".theta_deg: required for pivoting grids");
    }
    const auto ths = num_list(obj["theta_deg"], ctx + ".theta_deg");
    std::vector<double> rates{0.0};
    if (obj.contains("theta_dot")) {
      rates = num_list(obj["theta_dot"], ctx + ".theta_dot");
    }
    for (double th : ths) {
      for (double w : rates) {
        states.push_back(Eigen::Vector2d(th * kDegToRad, w));
      }
    }
  }
  if (states.empty()) throw ConfigError(ctx + ": grid expands to no states");
  return states;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  require_object(doc, "config");
  check_keys(doc, "config",
             {"model", "pushing", "pivoting", "planner", "cost",
              "initial_states", "initial_grid", "noise", "criteria", "seed",
              "simulation", "ablation", "aspect_ratios", "out"});

  ExperimentConfig cfg;
  if (!doc.contains("model") || !doc["model"].is_string()) {
    throw ConfigError("config.model: expected \"pushing\" or \"pivoting\"");
  }
  cfg.model_kind = doc["model"].get<std::string>();
  if (cfg.model_kind != "pushing" && cfg.model_kind != "pivoting") {
    throw ConfigError("config.model: expected \"pushing\" or \"pivoting\", got \"" +
                      cfg.model_kind + "\"");
  }
  const bool is_pushing = cfg.model_kind == "pushing";

  if (doc.contains("pushing")) {
    if (!is_pushing) throw ConfigError("config.pushing: model is pivoting");
    cfg.pushing = parse_pushing(doc["pushing"]);
  }
  if (doc.contains("pivoting")) {
    if (is_pushing) throw ConfigError("config.pivoting: model is pushing");
    cfg.pivoting = parse_pivoting(doc["pivoting"]);
  }

  const int state_dim = is_pushing ? 3 : 2;
  const int input_dim = is_pushing ? (cfg.pushing.variable_dt ? 3 : 2) : 4;
  // Mode labels match the models: pushing sides 0-3, pivoting corners 1-3.
  const std::vector<int> valid_modes =
      is_pushing ? std::vector<int>{0, 1, 2, 3} : std::vector<int>{1, 2, 3};

  apply_kind_defaults(&cfg);
  cfg.planner.workers = 0;  // 0: let the CLI decide
  cfg.planner.enabled_modes = valid_modes;
  if (doc.contains("planner")) {
    const auto parsed = parse_planner(doc["planner"], valid_modes);
    cfg.planner = parsed;
    if (cfg.planner.enabled_modes.empty()) {
      cfg.planner.enabled_modes = valid_modes;
    }
  }

  if (doc.contains("cost")) {
    const std::string ctx = "config.cost";
    const auto& c = doc["cost"];
    require_object(c, ctx);
    check_keys(c, ctx, {"q", "r", "qn", "goal"});
    cfg.q = vec_field(c, ctx, "q", state_dim, cfg.q);
    cfg.r = vec_field(c, ctx, "r", input_dim, cfg.r);
    cfg.qn = vec_field(c, ctx, "qn", state_dim, cfg.qn);
    cfg.goal = vec_field(c, ctx, "goal", state_dim, cfg.goal);
    if ((cfg.q.array() < 0).any() || (cfg.qn.array() < 0).any()) {
      throw ConfigError(ctx + ".q/qn: weights must be >= 0");
    }
    if ((cfg.r.array() <= 0).any()) {
      throw ConfigError(ctx + ".r: weights must be > 0");
    }
  }

  if (doc.contains("initial_states") && doc.contains("initial_grid")) {
    throw ConfigError(
        "config.initial_states: give either an explicit list or a grid, "
        "not both");
  }
  if (doc.contains("initial_states")) {
    const auto& arr = doc["initial_states"];
    if (!arr.is_array() || arr.empty()) {
      throw ConfigError("config.initial_states: expected a nonempty array");
    }
    for (size_t i = 0; i < arr.size(); ++i) {
      const auto entry =
          num_list(arr[i], "config.initial_states[" + std::to_string(i) + "]");
      if (static_cast<int>(entry.size()) != state_dim) {
        throw ConfigError("config.initial_states[" + std::to_string(i) +
                          "]: expected " + std::to_string(state_dim) +
                          " entries, got " + std::to_string(entry.size()));
      }
      cfg.initial_states.push_back(Eigen::Map<const Eigen::VectorXd>(
          entry.data(), static_cast<Eigen::Index>(entry.size())));
    }
  } else if (doc.contains("initial_grid")) {
    cfg.initial_states = parse_initial_grid(doc["initial_grid"], cfg.model_kind);
  } else {
    throw ConfigError("config.initial_states: required (or initial_grid)");
  }

  cfg.noise.seed = static_cast<std::uint64_t>(int_field(doc, "config", "seed", 0));
  if (doc.contains("noise")) {
    const std::string ctx = "config.noise";
    const auto& n = doc["noise"];
    require_object(n, ctx);
    check_keys(n, ctx, {"state_sd", "input_sd", "seed"});
    cfg.noise.state_sd = vec_field(n, ctx, "state_sd", state_dim,
                                   cfg.noise.state_sd);
    cfg.noise.input_sd = vec_field(n, ctx, "input_sd", input_dim,
                                   cfg.noise.input_sd);
    if (n.contains("seed")) {
      cfg.noise.seed = static_cast<std::uint64_t>(int_field(n, ctx, "seed", 0));
    }
    if ((cfg.noise.state_sd.array() < 0).any() ||
        (cfg.noise.input_sd.size() > 0 && (cfg.noise.input_sd.array() < 0).any())) {
      throw ConfigError(ctx + ": standard deviations must be >= 0");
    }
  }

  if (doc.contains("criteria")) {
    const std::string ctx = "config.criteria";
    const auto& c = doc["criteria"];
    require_object(c, ctx);
    check_keys(c, ctx, {"thresholds"});
    cfg.criteria.thresholds =
        vec_field(c, ctx, "thresholds", state_dim, cfg.criteria.thresholds);
    if ((cfg.criteria.thresholds.array() <= 0).any()) {
      throw ConfigError(ctx + ".thresholds: must be > 0");
    }
  }

  if (doc.contains("simulation")) {
    const std::string ctx = "config.simulation";
    const auto& s = doc["simulation"];
    require_object(s, ctx);
    check_keys(s, ctx, {"runs", "compare_open_loop"});
    cfg.simulation.runs = int_field(s, ctx, "runs", cfg.simulation.runs);
    cfg.simulation.compare_open_loop =
        bool_field(s, ctx, "compare_open_loop", false);
    if (cfg.simulation.runs < 1) throw ConfigError(ctx + ".runs: must be >= 1");
  }

  if (doc.contains("ablation")) {
    cfg.has_ablation = true;
    cfg.ablation = parse_ablation(doc["ablation"], valid_modes);
  }

  if (doc.contains("aspect_ratios")) {
    if (is_pushing) {
      throw ConfigError("config.aspect_ratios: only meaningful for pivoting");
    }
    cfg.aspect_ratios =
        num_list(doc["aspect_ratios"], "config.aspect_ratios");
    for (double a : cfg.aspect_ratios) {
      if (a <= 0) throw ConfigError("config.aspect_ratios: must be > 0");
    }
  }

  if (doc.contains("out")) {
    if (!doc["out"].is_string()) {
      throw ConfigError("config.out: expected a string path");
    }
    cfg.out_dir = doc["out"].get<std::string>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return config_from_json(doc);
}

std::shared_ptr<DynamicsModel> make_model(const ExperimentConfig& cfg) {
  if (cfg.model_kind == "pushing") {
    return std::make_shared<PushingModel>(cfg.pushing);
  }
  return std::make_shared<PivotingModel>(cfg.pivoting);
}

QuadraticCost make_cost(const ExperimentConfig& cfg,
                        const DynamicsModel& model) {
  return QuadraticCost(cfg.q, cfg.r, cfg.qn, cfg.goal,
                       model.angle_state_indices());
}

}  // namespace hddp
