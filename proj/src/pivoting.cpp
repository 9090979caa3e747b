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

#include "hddp/pivoting.hpp"

#include <cmath>
#include <stdexcept>

namespace hddp {

Eigen::Vector2d pivoting_corner(int mode, const PivotingParams& params) {
  switch (mode) {
    case 1: return {params.width, 0.0};
    case 2: return {params.width, params.height};
    case 3: return {0.0, params.height};
    default: throw std::invalid_argument("pivoting: invalid corner mode");
  }
}

Eigen::Matrix2d pivoting_contact_frame(int mode) {
  Eigen::Vector2d n;
  const double s = 1.0 / std::sqrt(2.0);
  switch (mode) {
    case 1: n = {-s, s}; break;
    case 2: n = {-s, -s}; break;
    case 3: n = {s, -s}; break;
    default: throw std::invalid_argument("pivoting: invalid corner mode");
  }
  Eigen::Matrix2d frame;
  frame.col(0) = n;
  frame.col(1) = perp2(n);
  return frame;
}

void PivotingModel::accel_terms(double theta, int mode,
                                Eigen::RowVector4d* tau, double* bias) const {
  const double inv_ip = 1.0 / params_.pivot_inertia();
  const Eigen::Vector2d corner = pivoting_corner(mode, params_);
  const Eigen::Matrix2d frame = pivoting_contact_frame(mode);
  // Moments of the two contact-frame force basis vectors about the pivot;
  // rotation-invariant, so evaluated in the body frame.
  tau->setZero();
  (*tau)(0) = cross2(corner, frame.col(0)) * inv_ip;
  (*tau)(1) = cross2(corner, frame.col(1)) * inv_ip;
  // The ground reaction acts at the pivot: zero moment (columns 2, 3).
  const Eigen::Vector2d r_c = rotation2(theta) * params_.com_offset();
  const Eigen::Vector2d g_vec(0.0, -params_.gravity);
  *bias = params_.mass * cross2(r_c, g_vec) * inv_ip;
}

double pivoting_accel(const State& x, const Control& u, int mode,
                      const PivotingParams& params) {
  PivotingModel model(params);
  Eigen::RowVector4d tau;
  double bias;
  model.accel_terms(x(0), mode, &tau, &bias);
  return tau.dot(u) + bias;
}

PivotingModel::PivotingModel(PivotingParams params) : params_(params) {
  if (params_.width <= 0.0 || params_.height <= 0.0 || params_.mass <= 0.0 ||
      params_.mu <= 0.0 || params_.n_max <= 0.0 || params_.dt <= 0.0) {
    throw std::invalid_argument("pivoting: params must be positive");
  }
}

State PivotingModel::step(const State& x, const Control& u, int mode) const {
  Eigen::RowVector4d tau;
  double bias;
  accel_terms(x(0), mode, &tau, &bias);
  const double accel = tau.dot(u) + bias;
  State next(2);
  next(0) = x(0) + params_.dt * x(1);
  next(1) = x(1) + params_.dt * accel;
  return next;
}

void PivotingModel::jacobians(const State& x, const Control&, int mode,
                              Eigen::MatrixXd* fx, Eigen::MatrixXd* fu) const {
  Eigen::RowVector4d tau;
  double bias;
  accel_terms(x(0), mode, &tau, &bias);
  // d(bias)/d(theta) differentiates the rotated COM offset.
  const Eigen::Vector2d r_c = params_.com_offset();
  const double theta = x(0);
  const Eigen::Vector2d dr_c(-std::sin(theta) * r_c.x() -
                                 std::cos(theta) * r_c.y(),
                             std::cos(theta) * r_c.x() -
                                 std::sin(theta) * r_c.y());
  const Eigen::Vector2d g_vec(0.0, -params_.gravity);
  const double dbias = params_.mass * cross2(dr_c, g_vec) /
                       params_.pivot_inertia();

  fx->resize(2, 2);
  *fx << 1.0, params_.dt,
         params_.dt * dbias, 1.0;
  fu->setZero(2, 4);
  fu->row(1) = params_.dt * tau;
}

InputConstraintSet PivotingModel::constraints(const State& x, int mode) const {
  InputConstraintSet cons;
  cons.A = Eigen::MatrixXd::Zero(8, 4);
  cons.b = Eigen::VectorXd::Zero(8);
  // Corner contact in its bisector frame: 0 <= f_n <= n_max, |f_t| <= mu f_n.
  cons.A(0, 0) = 1.0;
  cons.A(1, 0) = -1.0;
  cons.b(1) = -params_.n_max;
  cons.A(2, 0) = params_.mu;
  cons.A(2, 1) = -1.0;
  cons.A(3, 0) = params_.mu;
  cons.A(3, 1) = 1.0;
  // Ground reaction in the world frame: normal is +y at a flat support.
  cons.A(4, 3) = 1.0;
  cons.A(5, 3) = -1.0;
  cons.b(5) = -params_.n_max;
  cons.A(6, 3) = params_.mu;
  cons.A(6, 2) = -1.0;
  cons.A(7, 3) = params_.mu;
  cons.A(7, 2) = 1.0;

  // Linear momentum balance: m a_c = f_i_world + f0 + m g with the COM
  // acceleration slaved to the pivot rotation,
  // a_c = theta_dd * perp(R r_c) - theta_dot^2 * (R r_c).
  Eigen::RowVector4d tau;
  double bias;
  accel_terms(x(0), mode, &tau, &bias);
  const Eigen::Vector2d r_c_w = rotation2(x(0)) * params_.com_offset();
  const Eigen::Vector2d g_vec(0.0, -params_.gravity);
  const double m = params_.mass;

  Eigen::Matrix<double, 2, 4> force_map = Eigen::Matrix<double, 2, 4>::Zero();
  force_map.leftCols<2>() = rotation2(x(0)) * pivoting_contact_frame(mode);
  force_map.rightCols<2>() = Eigen::Matrix2d::Identity();

  cons.G = m * perp2(r_c_w) * tau - force_map;
  cons.h = m * g_vec + m * x(1) * x(1) * r_c_w - m * bias * perp2(r_c_w);
  cons.form = InputConstraintSet::Form::kGeneral;
  return cons;
}

void PivotingModel::equilibrium_system(const State& x, int mode,
                                       Eigen::MatrixXd* c,
                                       Eigen::VectorXd* d) const {
  // Zero angular acceleration on top of the momentum rows supplied by
  // constraints(): tau . u = -bias.
  Eigen::RowVector4d tau;
  double bias;
  accel_terms(x(0), mode, &tau, &bias);
  c->resize(1, 4);
  c->row(0) = tau;
  d->resize(1);
  (*d)(0) = -bias;
}

State PivotingModel::equilibrium_state(const State& x) const {
  State rest = x;
  rest(1) = 0.0;
  return rest;
}

}  // namespace hddp
