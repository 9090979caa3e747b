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

#ifndef HDDP_PIVOTING_HPP
#define HDDP_PIVOTING_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hddp/dynamics.hpp"

namespace hddp {

// Dynamic pivoting of a uniform rectangle about its lower-left corner P0,
// which stays in sticking contact with the ground at the world origin.
// State is (theta, theta_dot); the input stacks the pusher force at the
// active corner, expressed in that corner's 45-degree bisector contact
// frame, with the world-frame ground reaction at the pivot:
// u = (f_n, f_t, f0_x, f0_y).
struct PivotingParams {
  double width = 0.09;   // [m]
  double height = 0.09;  // [m]
  double mass = 0.1;     // [kg]
  double mu = 0.5;       // friction at pusher and ground contacts
  double n_max = 10.0;   // normal-force cap at both contacts [N]
  double dt = 0.05;      // [s]
  double gravity = 9.81;

  // Uniform-density inertia about the center of mass.
  double com_inertia() const {
    return mass * (width * width + height * height) / 12.0;
  }
  // Inertia about the pivot corner (parallel axis).
  double pivot_inertia() const {
    const double rx = 0.5 * width;
    const double ry = 0.5 * height;
    return com_inertia() + mass * (rx * rx + ry * ry);
  }
  // Pivot-to-COM offset in the body frame.
  Eigen::Vector2d com_offset() const {
    return {0.5 * width, 0.5 * height};
  }
};

// Body-frame position of corner i relative to the pivot (P1 lower-right,
// P2 upper-right, P3 upper-left) and the corner's contact frame with the
// inward bisector as the normal.
Eigen::Vector2d pivoting_corner(int mode, const PivotingParams& params);
Eigen::Matrix2d pivoting_contact_frame(int mode);

// Angular acceleration from the moment balance about the fixed pivot:
// theta_dd = [ (R r_i) x f_i_world + (R r_0) x f0 + (R r_c) x m g ] / I_pivot
// with all lever arms taken from the pivot, so the ground-reaction term
// vanishes identically (r_0 = 0) and gravity acts through the COM offset.
double pivoting_accel(const State& x, const Control& u, int mode,
                      const PivotingParams& params);

class PivotingModel final : public DynamicsModel {
 public:
  explicit PivotingModel(PivotingParams params);

  std::string name() const override { return "pivoting"; }
  int state_dim() const override { return 2; }
  int input_dim() const override { return 4; }
  std::vector<int> modes() const override { return {1, 2, 3}; }
  std::vector<int> angle_state_indices() const override { return {0}; }

  State step(const State& x, const Control& u, int mode) const override;
  void jacobians(const State& x, const Control& u, int mode,
                 Eigen::MatrixXd* fx, Eigen::MatrixXd* fu) const override;

  // Friction cones and normal-force caps for the corner contact and the
  // ground reaction, plus the two-row linear-momentum balance G(x) u = h(x)
  // that ties the ground reaction to the accelerating COM.
  InputConstraintSet constraints(const State& x, int mode) const override;

  void equilibrium_system(const State& x, int mode, Eigen::MatrixXd* c,
                          Eigen::VectorXd* d) const override;
  State equilibrium_state(const State& x) const override;
  double step_duration(const Control&) const override { return params_.dt; }

  const PivotingParams& params() const { return params_; }

  // Affine decomposition theta_dd(x, u) = tau . u + bias(theta).
  void accel_terms(double theta, int mode, Eigen::RowVector4d* tau,
                   double* bias) const;

 private:
  PivotingParams params_;
};

}  // namespace hddp

#endif  // HDDP_PIVOTING_HPP
