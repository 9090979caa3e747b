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

#include "hddp/serialization.hpp"

#include <cstdio>
#include <stdexcept>

namespace hddp {
namespace {

nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vec_from_json(const nlohmann::json& arr) {
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v(i) = arr[i].get<double>();
  return v;
}

nlohmann::json mat_to_json_row_major(const Eigen::MatrixXd& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  }
  return arr;
}

// Fixed-precision CSV cell; %.9g keeps rates and times readable while staying
// deterministic for a given value.
std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return std::string(buf);
}

}  // namespace

nlohmann::json trajectory_to_json(const Trajectory& traj,
                                  const DynamicsModel& model) {
  nlohmann::json doc;
  nlohmann::json states = nlohmann::json::array();
  for (const auto& x : traj.states) states.push_back(vec_to_json(x));
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& u : traj.inputs) inputs.push_back(vec_to_json(u));
  nlohmann::json dt = nlohmann::json::array();
  for (int k = 0; k < traj.horizon(); ++k) {
    dt.push_back(model.step_duration(traj.inputs[k]));
  }
  doc["states"] = states;
  doc["inputs"] = inputs;
  doc["modes"] = traj.modes;
  doc["dt"] = dt;
  return doc;
}

Trajectory trajectory_from_json(const nlohmann::json& doc) {
  Trajectory traj;
  for (const auto& x : doc.at("states")) traj.states.push_back(vec_from_json(x));
  for (const auto& u : doc.at("inputs")) traj.inputs.push_back(vec_from_json(u));
  traj.modes = doc.at("modes").get<std::vector<int>>();
  if (traj.states.size() != traj.inputs.size() + 1 ||
      traj.modes.size() != traj.inputs.size()) {
    throw std::runtime_error("trajectory document: inconsistent lengths");
  }
  return traj;
}

nlohmann::json law_to_json(const ControlLaw& law) {
  nlohmann::json doc;
  nlohmann::json ff = nlohmann::json::array();
  for (const auto& k : law.feedforward) ff.push_back(vec_to_json(k));
  nlohmann::json fb = nlohmann::json::array();
  for (const auto& K : law.feedback) {
    nlohmann::json entry;
    entry["rows"] = K.rows();
    entry["cols"] = K.cols();
    entry["data"] = mat_to_json_row_major(K);
    fb.push_back(entry);
  }
  doc["feedforward"] = ff;
  doc["feedback"] = fb;
  return doc;
}

ControlLaw law_from_json(const nlohmann::json& doc) {
  ControlLaw law;
  for (const auto& k : doc.at("feedforward")) {
    law.feedforward.push_back(vec_from_json(k));
  }
  for (const auto& entry : doc.at("feedback")) {
    const int rows = entry.at("rows").get<int>();
    const int cols = entry.at("cols").get<int>();
    const auto& data = entry.at("data");
    if (static_cast<int>(data.size()) != rows * cols) {
      throw std::runtime_error("control law document: bad gain shape");
    }
    Eigen::MatrixXd K(rows, cols);
    size_t i = 0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) K(r, c) = data[i++].get<double>();
    }
    law.feedback.push_back(K);
  }
  if (law.feedback.size() != law.feedforward.size()) {
    throw std::runtime_error("control law document: inconsistent lengths");
  }
  return law;
}

nlohmann::json plan_to_json(const HybridPlan& plan,
                            const DynamicsModel& model) {
  nlohmann::json doc;
  doc["model"] = model.name();
  doc["best_sequence"] = {{"modes", plan.best.modes},
                          {"switch_steps", plan.best.switch_steps}};
  doc["cost"] = plan.cost;
  doc["trajectory"] = trajectory_to_json(plan.trajectory, model);
  doc["law"] = law_to_json(plan.law);
  nlohmann::json leaves = nlohmann::json::array();
  for (const auto& leaf : plan.leaf_table) {
    nlohmann::json entry;
    entry["modes"] = leaf.sequence.modes;
    entry["switch_steps"] = leaf.sequence.switch_steps;
    entry["approx_cost"] = leaf.approx_cost;
    entry["pruned"] = leaf.pruned;
    entry["prune_reason"] = leaf.prune_reason;
    leaves.push_back(entry);
  }
  doc["leaf_table"] = leaves;
  doc["best_leaf_index"] = plan.best_leaf_index;
  doc["final_cost_log"] = plan.final_cost_log;
  doc["timing"] = {{"tree_seconds", plan.tree_seconds},
                   {"final_seconds", plan.final_seconds}};
  return doc;
}

HybridPlan plan_from_json(const nlohmann::json& doc) {
  HybridPlan plan;
  const auto& best = doc.at("best_sequence");
  plan.best.modes = best.at("modes").get<std::vector<int>>();
  plan.best.switch_steps = best.at("switch_steps").get<std::vector<int>>();
  plan.cost = doc.at("cost").get<double>();
  plan.trajectory = trajectory_from_json(doc.at("trajectory"));
  plan.law = law_from_json(doc.at("law"));
  if (doc.contains("leaf_table")) {
    for (const auto& entry : doc.at("leaf_table")) {
      LeafCandidate leaf;
      leaf.sequence.modes = entry.at("modes").get<std::vector<int>>();
      leaf.sequence.switch_steps =
          entry.at("switch_steps").get<std::vector<int>>();
      leaf.approx_cost = entry.at("approx_cost").get<double>();
      leaf.pruned = entry.at("pruned").get<bool>();
      leaf.prune_reason = entry.at("prune_reason").get<std::string>();
      plan.leaf_table.push_back(leaf);
    }
  }
  plan.best_leaf_index = doc.value("best_leaf_index", -1);
  if (doc.contains("timing")) {
    plan.tree_seconds = doc["timing"].value("tree_seconds", 0.0);
    plan.final_seconds = doc["timing"].value("final_seconds", 0.0);
  }
  if (plan.law.horizon() != plan.trajectory.horizon()) {
    throw std::runtime_error("plan document: law/trajectory length mismatch");
  }
  return plan;
}

nlohmann::json sim_result_to_json(const SimResult& result,
                                  const DynamicsModel& model) {
  nlohmann::json doc;
  doc["executed"] = trajectory_to_json(result.executed, model);
  doc["terminal_error"] = vec_to_json(result.terminal_error);
  doc["success"] = result.success;
  doc["diverged_step"] = result.diverged_step;
  return doc;
}

std::string ablation_csv(const std::vector<AblationCell>& cells) {
  std::string out =
      "contact_size,max_switches,tree_iterations,horizon,n,success_rate,"
      "plan_time_tree_mean,plan_time_tree_sd,plan_time_final_mean,"
      "plan_time_final_sd\n";
  for (const auto& cell : cells) {
    out += std::to_string(cell.contact_size) + ",";
    out += std::to_string(cell.max_switches) + ",";
    out += std::to_string(cell.tree_iterations) + ",";
    out += std::to_string(cell.horizon) + ",";
    out += std::to_string(cell.n) + ",";
    out += fmt(cell.success_rate) + ",";
    out += fmt(cell.tree_mean) + ",";
    out += fmt(cell.tree_sd) + ",";
    out += fmt(cell.final_mean) + ",";
    out += fmt(cell.final_sd) + "\n";
  }
  return out;
}

std::string pusher_path_csv(const std::vector<PusherPathPoint>& path) {
  std::string out = "step,x,y,switch_reset\n";
  for (const auto& pt : path) {
    out += std::to_string(pt.step) + ",";
    out += fmt(pt.position.x()) + ",";
    out += fmt(pt.position.y()) + ",";
    out += (pt.switch_reset ? "1" : "0");
    out += "\n";
  }
  return out;
}

}  // namespace hddp
