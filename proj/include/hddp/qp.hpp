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

#ifndef HDDP_QP_HPP
#define HDDP_QP_HPP

#include <vector>

#include <Eigen/Dense>

#include "hddp/constraints.hpp"

namespace hddp {

// Dense strictly convex quadratic program
//   minimize    1/2 z' H z + g' z
//   subject to  A z >= b,  G z = h
// with H symmetric positive definite. Sized for the small problems that
// arise per time step (a handful of variables, at most a few dozen rows).
struct QuadraticProgram {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
};

enum class QPStatus { kOptimal, kInfeasible, kMaxIterations };

struct QPSolution {
  QPStatus status = QPStatus::kMaxIterations;
  Eigen::VectorXd z;
  // Multipliers for A z >= b (nonnegative at optimality) and for G z = h.
  Eigen::VectorXd ineq_multipliers;
  Eigen::VectorXd eq_multipliers;
  // Indices of inequality rows active at the solution, ascending.
  std::vector<int> active_set;
  int iterations = 0;
  double objective = 0.0;
};

struct QPOptions {
  // Iteration cap is iter_cap_factor * (num inequality + equality rows).
  int iter_cap_factor = 100;
  // Initial elastic penalty weight (scaled by the gradient magnitude) and
  // its growth factor per escalation.
  double big_m = 1e4;
  double big_m_growth = 100.0;
  int max_escalations = 3;
  // The problem is declared infeasible when the elastic slack exceeds this
  // after all escalations.
  double infeasibility_tol = 1e-7;
  double dual_tol = 1e-10;
};

// Primal active-set method. Equality constraints are eliminated through a
// null-space basis up front; an elastic slack shared across all inequality
// rows makes the initial equality-constrained minimizer feasible, so no
// separate phase-one solve is needed. Deterministic: ties in the blocking
// and dropping rules are broken toward the lowest row index.
QPSolution solve_qp(const QuadraticProgram& qp, const QPOptions& opts = {});

// Max-norm KKT residuals of a candidate primal/dual pair.
struct KKTResiduals {
  double stationarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;

  double max() const;
};

KKTResiduals kkt_residuals(const QuadraticProgram& qp, const QPSolution& sol);

// Euclidean projection onto the feasible set: uses the tagged closed form
// when available, otherwise a projection QP. Inputs already feasible are
// returned unchanged. Throws std::runtime_error if the set is empty.
Eigen::VectorXd project_feasible(const Eigen::VectorXd& u,
                                 const InputConstraintSet& cons);

}  // namespace hddp

#endif  // HDDP_QP_HPP
