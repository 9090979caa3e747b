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

#ifndef HDDP_CONSTRAINTS_HPP
#define HDDP_CONSTRAINTS_HPP

#include <Eigen/Dense>

namespace hddp {

// Polyhedral input-feasible set { u : A u >= b, G u = h }.
//
// The rows always describe the full set; `form` additionally tags sets whose
// Euclidean projection has a cheap closed form so hot loops can skip the QP:
//   kBox     - axis-aligned box on all coordinates (box_lo/box_hi sized dim).
//   kConeBox - truncated friction cone on coordinates (0, 1) =
//              (normal, tangential), i.e. 0 <= u0 <= n_max, |u1| <= mu * u0,
//              plus an axis-aligned box on any remaining coordinates
//              (box_lo/box_hi sized dim - 2).
//   kGeneral - no special structure; project via the QP solver.
struct InputConstraintSet {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;

  enum class Form { kGeneral, kConeBox, kBox };
  Form form = Form::kGeneral;
  double mu = 0.0;
  double n_max = 0.0;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;

  int dim() const { return static_cast<int>(A.cols()); }
  int num_inequalities() const { return static_cast<int>(A.rows()); }
  int num_equalities() const { return static_cast<int>(G.rows()); }
};

// True iff A u >= b - tol (componentwise) and |G u - h| <= tol.
bool check_feasible(const InputConstraintSet& cons, const Eigen::VectorXd& u,
                    double tol = 1e-9);

// Euclidean projection of (n0, t0) onto the truncated friction cone
// { (n, t) : 0 <= n <= n_max, |t| <= mu * n }.
Eigen::Vector2d project_truncated_cone(double n0, double t0, double mu,
                                       double n_max);

}  // namespace hddp

#endif  // HDDP_CONSTRAINTS_HPP
