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

#include "hddp/constraints.hpp"

#include <algorithm>
#include <cmath>

namespace hddp {

bool check_feasible(const InputConstraintSet& cons, const Eigen::VectorXd& u,
                    double tol) {
  if (cons.A.rows() > 0) {
    if (((cons.A * u - cons.b).array() < -tol).any()) return false;
  }
  if (cons.G.rows() > 0) {
    if (((cons.G * u - cons.h).array().abs() > tol).any()) return false;
  }
  return true;
}

Eigen::Vector2d project_truncated_cone(double n0, double t0, double mu,
                                       double n_max) {
  double n, t;
  if (n0 >= 0.0 && std::abs(t0) <= mu * n0) {
    // Interior (or boundary) of the untruncated cone.
    n = n0;
    t = t0;
  } else if (n0 + mu * std::abs(t0) <= 0.0) {
    // Inside the polar cone: the apex is closest.
    n = 0.0;
    t = 0.0;
  } else {
    // Closest point lies on the near edge ray (1, s*mu) / sqrt(1 + mu^2).
    const double s = (t0 >= 0.0) ? 1.0 : -1.0;
    const double c = (n0 + s * mu * t0) / (1.0 + mu * mu);
    n = c;
    t = c * s * mu;
  }
  if (n > n_max) {
    // The projection onto the untruncated cone violates the normal-force cap,
    // so the projection onto the truncated set lies on the cap face.
    n = n_max;
    t = std::clamp(t0, -mu * n_max, mu * n_max);
  }
  return Eigen::Vector2d(n, t);
}

}  // namespace hddp
