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

#ifndef HDDP_TYPES_HPP
#define HDDP_TYPES_HPP

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace hddp {

using State = Eigen::VectorXd;
using Control = Eigen::VectorXd;

// Wraps an angle to the half-open interval (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

// Planar rotation matrix, counterclockwise-positive.
inline Eigen::Matrix2d rotation2(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

// Rotation acting on a planar twist (vx, vy, omega): the angular rate is
// frame-invariant, so the lower-right block is the identity.
inline Eigen::Matrix3d twist_rotation(double theta) {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  r.topLeftCorner<2, 2>() = rotation2(theta);
  return r;
}

// Planar cross product a x b (z component).
inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Perpendicular of a planar vector: rotation by +90 degrees.
inline Eigen::Vector2d perp2(const Eigen::Vector2d& v) {
  return Eigen::Vector2d(-v.y(), v.x());
}

// A state/input/mode triple over a fixed horizon. states holds N+1 entries,
// inputs and modes hold N each; modes[k] selects the contact used over the
// interval [k, k+1).
struct Trajectory {
  std::vector<State> states;
  std::vector<Control> inputs;
  std::vector<int> modes;

  int horizon() const { return static_cast<int>(inputs.size()); }
};

// Time-varying affine feedback policy u_k = u_nom_k + feedforward_k +
// feedback_k * (x - x_nom_k).
struct ControlLaw {
  std::vector<Eigen::VectorXd> feedforward;
  std::vector<Eigen::MatrixXd> feedback;

  int horizon() const { return static_cast<int>(feedforward.size()); }
};

}  // namespace hddp

#endif  // HDDP_TYPES_HPP
