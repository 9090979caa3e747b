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

#include "hddp/pushing.hpp"

#include <cmath>
#include <stdexcept>

namespace hddp {

Eigen::Matrix3d limit_surface_matrix(const PushingParams& params) {
  const double f_max = params.mu_ground * params.mass * params.gravity;
  const double m_max = 0.6 * params.half_side * f_max;
  Eigen::Matrix3d l = Eigen::Matrix3d::Zero();
  l(0, 0) = 1.0 / (f_max * f_max);
  l(1, 1) = 1.0 / (f_max * f_max);
  l(2, 2) = 1.0 / (m_max * m_max);
  return l;
}

Eigen::Vector2d pushing_contact_point(int mode, const PushingParams& params) {
  const double a = params.half_side;
  switch (mode) {
    case 0: return {-a, 0.0};  // left side, pushed toward +x
    case 1: return {0.0, -a};  // bottom, pushed toward +y
    case 2: return {a, 0.0};   // right, pushed toward -x
    case 3: return {0.0, a};   // top, pushed toward -y
    default: throw std::invalid_argument("pushing: invalid contact mode");
  }
}

Eigen::Matrix2d pushing_contact_frame(int mode) {
  Eigen::Vector2d n;
  switch (mode) {
    case 0: n = {1.0, 0.0}; break;
    case 1: n = {0.0, 1.0}; break;
    case 2: n = {-1.0, 0.0}; break;
    case 3: n = {0.0, -1.0}; break;
    default: throw std::invalid_argument("pushing: invalid contact mode");
  }
  Eigen::Matrix2d frame;
  frame.col(0) = n;
  frame.col(1) = perp2(n);
  return frame;
}

Eigen::Matrix<double, 2, 3> contact_jacobian(const Eigen::Vector2d& p) {
  Eigen::Matrix<double, 2, 3> j;
  j << 1.0, 0.0, -p.y(),
       0.0, 1.0, p.x();
  return j;
}

PushingModel::PushingModel(PushingParams params)
    : params_(params), limit_surface_(limit_surface_matrix(params)) {
  if (params_.half_side <= 0.0 || params_.mass <= 0.0 || params_.mu <= 0.0 ||
      params_.mu_ground <= 0.0 || params_.n_max <= 0.0 || params_.dt <= 0.0) {
    throw std::invalid_argument("pushing: params must be positive");
  }
  if (params_.variable_dt && (params_.dt_min <= 0.0 ||
                              params_.dt_max < params_.dt_min)) {
    throw std::invalid_argument("pushing: bad dt bounds");
  }
}

Eigen::Vector3d PushingModel::twist(const State& x, const Eigen::Vector2d& f,
                                    int mode) const {
  const Eigen::Vector2d p = pushing_contact_point(mode, params_);
  const Eigen::Vector2d f_body = pushing_contact_frame(mode) * f;
  const Eigen::Vector3d wrench = contact_jacobian(p).transpose() * f_body;
  return twist_rotation(x(2)) * (limit_surface_ * wrench);
}

State PushingModel::step(const State& x, const Control& u, int mode) const {
  const double dt = step_duration(u);
  return x + dt * twist(x, u.head<2>(), mode);
}

void PushingModel::jacobians(const State& x, const Control& u, int mode,
                             Eigen::MatrixXd* fx, Eigen::MatrixXd* fu) const {
  const double dt = step_duration(u);
  const double theta = x(2);
  const Eigen::Vector2d p = pushing_contact_point(mode, params_);
  const Eigen::Matrix2d frame = pushing_contact_frame(mode);
  const Eigen::Matrix<double, 3, 2> gain =
      contact_jacobian(p).transpose() * frame;
  const Eigen::Vector3d body_rate = limit_surface_ * (gain * u.head<2>());

  Eigen::Matrix3d rot_dot = Eigen::Matrix3d::Zero();
  rot_dot(0, 0) = -std::sin(theta);
  rot_dot(0, 1) = -std::cos(theta);
  rot_dot(1, 0) = std::cos(theta);
  rot_dot(1, 1) = -std::sin(theta);

  fx->setIdentity(3, 3);
  fx->col(2) += dt * (rot_dot * body_rate);

  fu->setZero(3, input_dim());
  fu->leftCols(2) =
      dt * twist_rotation(theta) * limit_surface_ * gain;
  if (params_.variable_dt) {
    fu->col(2) = twist_rotation(theta) * body_rate;
  }
}

InputConstraintSet PushingModel::constraints(const State&, int mode) const {
  if (mode < 0 || mode > 3) {
    throw std::invalid_argument("pushing: invalid contact mode");
  }
  InputConstraintSet cons;
  const int m = input_dim();
  const int rows = params_.variable_dt ? 6 : 4;
  cons.A = Eigen::MatrixXd::Zero(rows, m);
  cons.b = Eigen::VectorXd::Zero(rows);
  // 0 <= f_n <= n_max and |f_t| <= mu f_n, all in the contact frame.
  cons.A(0, 0) = 1.0;
  cons.A(1, 0) = -1.0;
  cons.b(1) = -params_.n_max;
  cons.A(2, 0) = params_.mu;
  cons.A(2, 1) = -1.0;
  cons.A(3, 0) = params_.mu;
  cons.A(3, 1) = 1.0;
  if (params_.variable_dt) {
    cons.A(4, 2) = 1.0;
    cons.b(4) = params_.dt_min;
    cons.A(5, 2) = -1.0;
    cons.b(5) = -params_.dt_max;
  }
  cons.G = Eigen::MatrixXd::Zero(0, m);
  cons.h = Eigen::VectorXd::Zero(0);
  cons.form = InputConstraintSet::Form::kConeBox;
  cons.mu = params_.mu;
  cons.n_max = params_.n_max;
  if (params_.variable_dt) {
    cons.box_lo = Eigen::VectorXd::Constant(1, params_.dt_min);
    cons.box_hi = Eigen::VectorXd::Constant(1, params_.dt_max);
  }
  return cons;
}

void PushingModel::equilibrium_system(const State&, int mode,
                                      Eigen::MatrixXd* c,
                                      Eigen::VectorXd* d) const {
  // Zero twist iff the support wrench vanishes: J' F f = 0.
  const Eigen::Vector2d p = pushing_contact_point(mode, params_);
  const Eigen::Matrix<double, 3, 2> gain =
      contact_jacobian(p).transpose() * pushing_contact_frame(mode);
  c->setZero(3, input_dim());
  c->leftCols(2) = gain;
  d->setZero(3);
}

double PushingModel::step_duration(const Control& u) const {
  return params_.variable_dt ? u(2) : params_.dt;
}

}  // namespace hddp
