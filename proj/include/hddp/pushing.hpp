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

#ifndef HDDP_PUSHING_HPP
#define HDDP_PUSHING_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hddp/dynamics.hpp"

namespace hddp {

// Quasi-static planar pushing of a uniform square slab. State is the slab
// pose (x, y, theta) in the world frame; the input is the pusher force
// (f_n, f_t) expressed in the active contact frame, optionally extended with
// the step duration as a third input coordinate.
struct PushingParams {
  double half_side = 0.045;  // a [m]
  double mass = 1.0;         // [kg]
  double mu = 0.3;           // pusher-object friction
  double mu_ground = 0.35;   // support-surface friction
  double n_max = 0.5;        // normal-force cap [N]
  double dt = 0.5;           // [s]
  double gravity = 9.81;
  bool variable_dt = false;  // when set, u = (f_n, f_t, dt)
  double dt_min = 0.1;
  double dt_max = 1.0;
};

// Ellipsoidal limit-surface weight L = diag(1/f_max^2, 1/f_max^2, 1/m_max^2)
// with f_max = mu_ground * m * g and m_max = 0.6 * a * f_max.
Eigen::Matrix3d limit_surface_matrix(const PushingParams& params);

// Body-frame midpoint of the side touched in `mode` (0 left, 1 bottom,
// 2 right, 3 top) and the contact frame (inward normal, tangent) columns.
Eigen::Vector2d pushing_contact_point(int mode, const PushingParams& params);
Eigen::Matrix2d pushing_contact_frame(int mode);

// Maps a body twist to the body-frame velocity of the point p:
// J = [1, 0, -p_y; 0, 1, p_x].
Eigen::Matrix<double, 2, 3> contact_jacobian(const Eigen::Vector2d& p);

class PushingModel final : public DynamicsModel {
 public:
  explicit PushingModel(PushingParams params);

  std::string name() const override { return "pushing"; }
  int state_dim() const override { return 3; }
  int input_dim() const override { return params_.variable_dt ? 3 : 2; }
  std::vector<int> modes() const override { return {0, 1, 2, 3}; }
  std::vector<int> angle_state_indices() const override { return {2}; }

  State step(const State& x, const Control& u, int mode) const override;
  void jacobians(const State& x, const Control& u, int mode,
                 Eigen::MatrixXd* fx, Eigen::MatrixXd* fu) const override;
  InputConstraintSet constraints(const State& x, int mode) const override;
  void equilibrium_system(const State& x, int mode, Eigen::MatrixXd* c,
                          Eigen::VectorXd* d) const override;
  double step_duration(const Control& u) const override;

  // World-frame twist of the slab under contact-frame force f.
  Eigen::Vector3d twist(const State& x, const Eigen::Vector2d& f,
                        int mode) const;

  const PushingParams& params() const { return params_; }

 private:
  PushingParams params_;
  Eigen::Matrix3d limit_surface_;
};

}  // namespace hddp

#endif  // HDDP_PUSHING_HPP
