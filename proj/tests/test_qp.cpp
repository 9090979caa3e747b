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

#include "hddp/qp.hpp"

#include <cmath>
#include <optional>
#include <random>

#include <gtest/gtest.h>

namespace hddp {
namespace {

// Reference solution by exhaustive active-set enumeration: every subset of
// inequality rows is tried as the active set, the resulting KKT system is
// solved directly, and candidates are kept only if primal and dual feasible.
// For a strictly convex QP the optimum, when it exists, is among them.
struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  Eigen::VectorXd z;
};

OracleResult brute_force_oracle(const QuadraticProgram& qp) {
  const int m = static_cast<int>(qp.H.rows());
  const int p = static_cast<int>(qp.A.rows());
  const int q = static_cast<int>(qp.G.rows());
  OracleResult best;
  for (unsigned mask = 0; mask < (1u << p); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < p; ++i) {
      if (mask & (1u << i)) subset.push_back(i);
    }
    const int ns = static_cast<int>(subset.size());
    const int dim = m + ns + q;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs(dim);
    kkt.topLeftCorner(m, m) = qp.H;
    rhs.head(m) = -qp.g;
    for (int i = 0; i < ns; ++i) {
      kkt.block(m + i, 0, 1, m) = qp.A.row(subset[i]);
      kkt.block(0, m + i, m, 1) = -qp.A.row(subset[i]).transpose();
      rhs(m + i) = qp.b(subset[i]);
    }
    if (q > 0) {
      kkt.block(m + ns, 0, q, m) = qp.G;
      kkt.block(0, m + ns, m, q) = -qp.G.transpose();
      rhs.tail(q) = qp.h;
    }
    const Eigen::VectorXd s = kkt.fullPivLu().solve(rhs);
    if (!s.allFinite()) continue;
    if ((kkt * s - rhs).cwiseAbs().maxCoeff() >
        1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
      continue;  // singular and inconsistent candidate system
    }
    const Eigen::VectorXd z = s.head(m);
    if (p > 0 && (qp.A * z - qp.b).minCoeff() < -1e-9) continue;
    if (q > 0 && (qp.G * z - qp.h).cwiseAbs().maxCoeff() > 1e-9) continue;
    if (ns > 0 && s.segment(m, ns).minCoeff() < -1e-9) continue;
    const double obj = 0.5 * z.dot(qp.H * z) + qp.g.dot(z);
    if (!best.feasible || obj < best.objective) {
      best.feasible = true;
      best.objective = obj;
      best.z = z;
    }
  }
  return best;
}

// KKT residuals recomputed from scratch (deliberately not through the
// library helper) so the check is independent of the solver code path.
double independent_kkt_max(const QuadraticProgram& qp, const QPSolution& s) {
  Eigen::VectorXd stat = qp.H * s.z + qp.g;
  if (qp.A.rows() > 0) stat -= qp.A.transpose() * s.ineq_multipliers;
  if (qp.G.rows() > 0) stat -= qp.G.transpose() * s.eq_multipliers;
  double worst = stat.cwiseAbs().maxCoeff();
  if (qp.A.rows() > 0) {
    const Eigen::VectorXd slack = qp.A * s.z - qp.b;
    worst = std::max(worst, -slack.minCoeff());
    worst = std::max(worst, -s.ineq_multipliers.minCoeff());
    worst = std::max(
        worst, s.ineq_multipliers.cwiseProduct(slack).cwiseAbs().maxCoeff());
  }
  if (qp.G.rows() > 0) {
    worst = std::max(worst, (qp.G * s.z - qp.h).cwiseAbs().maxCoeff());
  }
  return worst;
}

Eigen::MatrixXd random_spd(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd b(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) b(i, j) = gauss(rng);
  }
  return b.transpose() * b + 0.1 * Eigen::MatrixXd::Identity(m, m);
}

// Feasible by construction: a random point z0 satisfies every row, with a
// random share of the inequality rows active at z0 exactly.
QuadraticProgram random_feasible_qp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> m_dist(1, 6);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int m = m_dist(rng);
  std::uniform_int_distribution<int> p_dist(0, 8);
  std::uniform_int_distribution<int> q_dist(0, std::max(0, m - 1));
  const int p = p_dist(rng);
  const int q = std::min(q_dist(rng), 2);

  QuadraticProgram qp;
  qp.H = random_spd(m, rng);
  qp.g.resize(m);
  for (int i = 0; i < m; ++i) qp.g(i) = gauss(rng);
  Eigen::VectorXd z0(m);
  for (int i = 0; i < m; ++i) z0(i) = gauss(rng);

  qp.A.resize(p, m);
  qp.b.resize(p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < m; ++j) qp.A(i, j) = gauss(rng);
    const double slack = unit(rng) < 0.3 ? 0.0 : unit(rng);
    qp.b(i) = qp.A.row(i).dot(z0) - slack;
  }
  qp.G.resize(q, m);
  qp.h.resize(q);
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < m; ++j) qp.G(i, j) = gauss(rng);
    qp.h(i) = qp.G.row(i).dot(z0);
  }
  return qp;
}

TEST(QPSolver, MatchesBruteForceEnumerationOnRandomProblems) {
  std::mt19937_64 rng(20260814);
  for (int trial = 0; trial < 1000; ++trial) {
    const QuadraticProgram qp = random_feasible_qp(rng);
    const OracleResult oracle = brute_force_oracle(qp);
    ASSERT_TRUE(oracle.feasible) << "trial " << trial;

    const QPSolution sol = solve_qp(qp);
    ASSERT_EQ(sol.status, QPStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(sol.objective, oracle.objective,
                1e-7 * std::max(1.0, std::abs(oracle.objective)))
        << "trial " << trial;
    EXPECT_LT((sol.z - oracle.z).cwiseAbs().maxCoeff(), 1e-6)
        << "trial " << trial;
    EXPECT_LE(independent_kkt_max(qp, sol), 1e-8) << "trial " << trial;
  }
}

TEST(QPSolver, LibraryResidualHelperAgreesWithDirectComputation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const QuadraticProgram qp = random_feasible_qp(rng);
    const QPSolution sol = solve_qp(qp);
    ASSERT_EQ(sol.status, QPStatus::kOptimal);
    EXPECT_NEAR(kkt_residuals(qp, sol).max(), independent_kkt_max(qp, sol),
                1e-12);
  }
}

TEST(QPSolver, DetectsInfeasibleInequalities) {
  // x0 >= 1 and -x0 >= 1 cannot both hold.
  QuadraticProgram qp;
  qp.H = Eigen::MatrixXd::Identity(2, 2);
  qp.g = Eigen::VectorXd::Zero(2);
  qp.A.resize(2, 2);
  qp.A << 1, 0, -1, 0;
  qp.b.resize(2);
  qp.b << 1, 1;
  EXPECT_EQ(solve_qp(qp).status, QPStatus::kInfeasible);
}

TEST(QPSolver, DetectsInconsistentEqualities) {
  QuadraticProgram qp;
  qp.H = Eigen::MatrixXd::Identity(2, 2);
  qp.g = Eigen::VectorXd::Zero(2);
  qp.G.resize(2, 2);
  qp.G << 1, 1, 1, 1;
  qp.h.resize(2);
  qp.h << 0, 1;
  EXPECT_EQ(solve_qp(qp).status, QPStatus::kInfeasible);
}

TEST(QPSolver, EqualityOnlyProblemReducesToConstrainedLeastSquares) {
  // minimize 1/2 |z|^2 s.t. z0 + z1 = 2 has solution (1, 1).
  QuadraticProgram qp;
  qp.H = Eigen::MatrixXd::Identity(2, 2);
  qp.g = Eigen::VectorXd::Zero(2);
  qp.G.resize(1, 2);
  qp.G << 1, 1;
  qp.h.resize(1);
  qp.h << 2;
  const QPSolution sol = solve_qp(qp);
  ASSERT_EQ(sol.status, QPStatus::kOptimal);
  EXPECT_NEAR(sol.z(0), 1.0, 1e-12);
  EXPECT_NEAR(sol.z(1), 1.0, 1e-12);
  EXPECT_NEAR(sol.eq_multipliers(0), 1.0, 1e-12);
}

TEST(QPSolver, FullyPinnedPointChecksInequalities) {
  QuadraticProgram qp;
  qp.H = Eigen::MatrixXd::Identity(2, 2);
  qp.g = Eigen::VectorXd::Zero(2);
  qp.G = Eigen::MatrixXd::Identity(2, 2);
  qp.h.resize(2);
  qp.h << 3, -1;
  qp.A.resize(1, 2);
  qp.A << 1, 0;
  qp.b.resize(1);

  qp.b << 2;  // 3 >= 2 holds at the pinned point
  EXPECT_EQ(solve_qp(qp).status, QPStatus::kOptimal);
  qp.b << 4;  // 3 >= 4 fails
  EXPECT_EQ(solve_qp(qp).status, QPStatus::kInfeasible);
}

TEST(QPSolver, RejectsInvalidProblems) {
  QuadraticProgram qp;
  qp.H.resize(2, 2);
  qp.H << 1, 0.5, -0.5, 1;  // not symmetric
  qp.g = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(solve_qp(qp), std::invalid_argument);

  qp.H << 1, 0, 0, -1;  // indefinite
  EXPECT_THROW(solve_qp(qp), std::invalid_argument);

  qp.H = Eigen::MatrixXd::Identity(2, 2);
  qp.g = Eigen::VectorXd::Zero(3);  // size mismatch
  EXPECT_THROW(solve_qp(qp), std::invalid_argument);
}

TEST(QPSolver, DeterministicAcrossRepeatedSolves) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const QuadraticProgram qp = random_feasible_qp(rng);
    const QPSolution a = solve_qp(qp);
    const QPSolution b = solve_qp(qp);
    ASSERT_EQ(a.z.size(), b.z.size());
    for (int i = 0; i < a.z.size(); ++i) {
      EXPECT_EQ(a.z(i), b.z(i));  // bitwise
    }
    EXPECT_EQ(a.active_set, b.active_set);
    EXPECT_EQ(a.iterations, b.iterations);
  }
}

TEST(QPSolver, ReportedActiveRowsHaveZeroSlack) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const QuadraticProgram qp = random_feasible_qp(rng);
    const QPSolution sol = solve_qp(qp);
    ASSERT_EQ(sol.status, QPStatus::kOptimal);
    for (std::size_t i = 1; i < sol.active_set.size(); ++i) {
      EXPECT_LT(sol.active_set[i - 1], sol.active_set[i]);  // ascending
    }
    for (int row : sol.active_set) {
      EXPECT_NEAR(qp.A.row(row).dot(sol.z), qp.b(row), 1e-7);
    }
  }
}

TEST(TruncatedConeProjection, MatchesGenericQPProjection) {
  const double mu = 0.3;
  const double n_max = 0.5;
  InputConstraintSet cons;
  cons.A.resize(4, 2);
  cons.A << 1, 0, -1, 0, mu, -1, mu, 1;
  cons.b.resize(4);
  cons.b << 0, -n_max, 0, 0;
  cons.form = InputConstraintSet::Form::kGeneral;

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> span(-1.5, 1.5);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Vector2d u(span(rng), span(rng));
    const Eigen::Vector2d closed = project_truncated_cone(u(0), u(1), mu,
                                                          n_max);
    const Eigen::VectorXd via_qp = project_feasible(u, cons);
    EXPECT_LT((closed - via_qp.head<2>()).norm(), 1e-9)
        << "u = " << u.transpose();
  }
}

TEST(TruncatedConeProjection, HandlesBoundaryAndApexPoints) {
  const double mu = 0.5;
  const double n_max = 1.0;
  // Behind the apex along the axis: projects to the apex.
  EXPECT_EQ(project_truncated_cone(-1.0, 0.0, mu, n_max), Eigen::Vector2d(0, 0));
  // Interior points are fixed.
  const Eigen::Vector2d inside(0.5, 0.1);
  EXPECT_EQ(project_truncated_cone(inside(0), inside(1), mu, n_max), inside);
  // Beyond the cap, inside the cone: clamps the normal only.
  const Eigen::Vector2d over(2.0, 0.2);
  const Eigen::Vector2d clamped = project_truncated_cone(over(0), over(1), mu,
                                                         n_max);
  EXPECT_DOUBLE_EQ(clamped(0), n_max);
  EXPECT_DOUBLE_EQ(clamped(1), 0.2);
}

TEST(ProjectFeasible, FeasiblePointsAreReturnedUnchanged) {
  InputConstraintSet cons;
  cons.A.resize(2, 2);
  cons.A << 1, 0, 0, 1;
  cons.b = Eigen::VectorXd::Zero(2);
  cons.form = InputConstraintSet::Form::kGeneral;
  const Eigen::Vector2d u(0.25, 0.75);
  const Eigen::VectorXd v = project_feasible(u, cons);
  EXPECT_EQ(v(0), u(0));
  EXPECT_EQ(v(1), u(1));
}

TEST(ProjectFeasible, BoxFormClampsCoordinatewise) {
  InputConstraintSet cons;
  cons.A.resize(4, 2);
  cons.A << 1, 0, -1, 0, 0, 1, 0, -1;
  cons.b.resize(4);
  cons.b << -1, -1, -1, -1;
  cons.form = InputConstraintSet::Form::kBox;
  cons.box_lo = Eigen::Vector2d(-1, -1);
  cons.box_hi = Eigen::Vector2d(1, 1);
  const Eigen::Vector2d u(3.0, -0.5);
  const Eigen::VectorXd v = project_feasible(u, cons);
  EXPECT_DOUBLE_EQ(v(0), 1.0);
  EXPECT_DOUBLE_EQ(v(1), -0.5);
}

TEST(ProjectFeasible, ProjectionIsIdempotent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> span(-2.0, 2.0);
  InputConstraintSet cons;
  cons.A.resize(3, 2);
  cons.A << 1, 1, -1, 2, 0, -1;
  cons.b.resize(3);
  cons.b << -1, -2, -1.5;
  cons.form = InputConstraintSet::Form::kGeneral;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector2d u(span(rng), span(rng));
    const Eigen::VectorXd once = project_feasible(u, cons);
    EXPECT_TRUE(check_feasible(cons, once, 1e-8));
    const Eigen::VectorXd twice = project_feasible(once, cons);
    EXPECT_LT((once - twice).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ProjectFeasible, ThrowsOnEmptyFeasibleSet) {
  InputConstraintSet cons;
  cons.A.resize(2, 1);
  cons.A << 1, -1;
  cons.b.resize(2);
  cons.b << 1, 1;
  cons.form = InputConstraintSet::Form::kGeneral;
  EXPECT_THROW(project_feasible(Eigen::VectorXd::Zero(1), cons),
               std::runtime_error);
}

TEST(CheckFeasible, RespectsToleranceOnBothRowTypes) {
  InputConstraintSet cons;
  cons.A.resize(1, 2);
  cons.A << 1, 0;
  cons.b.resize(1);
  cons.b << 0;
  cons.G.resize(1, 2);
  cons.G << 0, 1;
  cons.h.resize(1);
  cons.h << 1;
  EXPECT_TRUE(check_feasible(cons, Eigen::Vector2d(0.0, 1.0)));
  EXPECT_TRUE(check_feasible(cons, Eigen::Vector2d(-1e-10, 1.0 + 1e-10)));
  EXPECT_FALSE(check_feasible(cons, Eigen::Vector2d(-1e-3, 1.0)));
  EXPECT_FALSE(check_feasible(cons, Eigen::Vector2d(0.0, 1.01)));
}

}  // namespace
}  // namespace hddp
