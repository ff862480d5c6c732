#include <random>

#include "doctest.h"
#include "ehz/errors.hpp"
#include "ehz/lp.hpp"

using ehz::lp::LinearProgram;
using ehz::lp::Status;

namespace {

Eigen::RowVectorXd row(std::initializer_list<double> v) {
  Eigen::RowVectorXd r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r[i++] = x;
  return r;
}

// Checks primal feasibility, dual sign, stationarity and the duality gap for a
// program whose variables are all free.
void check_certificate(const LinearProgram& lp, const ehz::lp::Solution& sol) {
  REQUIRE(sol.optimal());
  if (lp.ineq_matrix.rows() > 0) {
    CHECK((lp.ineq_matrix * sol.x - lp.ineq_rhs).maxCoeff() <= 1e-9);
    CHECK(sol.ineq_duals.minCoeff() >= 0.0);
    const Eigen::VectorXd slack = lp.ineq_rhs - lp.ineq_matrix * sol.x;
    CHECK(slack.cwiseProduct(sol.ineq_duals).cwiseAbs().maxCoeff() <= 1e-8);
  }
  if (lp.eq_matrix.rows() > 0) {
    CHECK((lp.eq_matrix * sol.x - lp.eq_rhs).cwiseAbs().maxCoeff() <= 1e-9);
  }
  CHECK(sol.reduced_costs.cwiseAbs().maxCoeff() <= 1e-8);
  double dual = 0.0;
  if (lp.ineq_matrix.rows() > 0) dual -= sol.ineq_duals.dot(lp.ineq_rhs);
  if (lp.eq_matrix.rows() > 0) dual -= sol.eq_duals.dot(lp.eq_rhs);
  CHECK(std::abs(sol.objective - dual) <= 1e-8 * (1.0 + std::abs(sol.objective)));
}

}  // namespace

TEST_CASE("lp: bounded maximisation on an interval") {
  LinearProgram lp(1);
  lp.objective << -1.0;
  lp.add_inequality(row({1.0}), 1.0);
  lp.set_lower(0, 0.0);
  const auto sol = ehz::lp::solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(sol.ineq_duals[0] == doctest::Approx(1.0));
}

TEST_CASE("lp: contradictory constraints are infeasible") {
  LinearProgram lp(1);
  lp.add_inequality(row({1.0}), 0.0);
  lp.add_inequality(row({-1.0}), -1.0);
  CHECK(ehz::lp::solve(lp).status == Status::kInfeasible);
}

TEST_CASE("lp: Bland tie-break picks the first basic solution") {
  LinearProgram lp(2);
  lp.add_equality(row({1.0, 1.0}), 1.0);
  lp.set_lower(0, 0.0);
  lp.set_lower(1, 0.0);
  const auto sol = ehz::lp::solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(0.0));
}

TEST_CASE("lp: unbounded direction is reported") {
  LinearProgram lp(2);
  lp.objective << -1.0, 0.0;
  lp.add_inequality(row({0.0, 1.0}), 1.0);
  CHECK(ehz::lp::solve(lp).status == Status::kUnbounded);
}

TEST_CASE("lp: shape errors are rejected") {
  LinearProgram lp(2);
  CHECK_THROWS_AS(lp.add_inequality(row({1.0}), 1.0), ehz::Error);
  lp.objective[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ehz::lp::solve(lp), ehz::Error);
}

TEST_CASE("lp: upper bounds and equalities together") {
  // min x0 + 2 x1 s.t. x0 + x1 = 3, 0 <= x0 <= 2, x1 >= 0  ->  (2, 1), value 4
  LinearProgram lp(2);
  lp.objective << 1.0, 2.0;
  lp.add_equality(row({1.0, 1.0}), 3.0);
  lp.set_lower(0, 0.0);
  lp.set_upper(0, 2.0);
  lp.set_lower(1, 0.0);
  const auto sol = ehz::lp::solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.x[0] == doctest::Approx(2.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(4.0));
  // x0 sits at its upper bound, so its bound multiplier is non-positive.
  CHECK(sol.reduced_costs[0] <= 1e-12);
}

TEST_CASE("lp: certificates hold on random feasible programs") {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const int m = n + 3 + trial % 7;
    LinearProgram lp(n);
    // Constraints <g_i, x> <= 1 with random g plus a box keep the program
    // bounded and feasible (x = 0 is interior).
    for (int i = 0; i < m; ++i) {
      Eigen::RowVectorXd g(n);
      for (int j = 0; j < n; ++j) g[j] = gauss(rng);
      lp.add_inequality(g, 1.0 + std::abs(gauss(rng)));
    }
    for (int j = 0; j < n; ++j) {
      Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
      e[j] = 1.0;
      lp.add_inequality(e, 5.0);
      lp.add_inequality(-e, 5.0);
      lp.objective[j] = gauss(rng);
    }
    if (trial % 3 == 0) {
      Eigen::RowVectorXd e(n);
      for (int j = 0; j < n; ++j) e[j] = gauss(rng);
      lp.add_equality(e, 0.0);
    }
    const auto sol = ehz::lp::solve(lp);
    check_certificate(lp, sol);

    // Determinism: bitwise identical on a re-solve.
    const auto again = ehz::lp::solve(lp);
    CHECK((again.x.array() == sol.x.array()).all());
  }
}

TEST_CASE("lp: degenerate vertex does not cycle") {
  // Classic Beale-style degenerate program.
  LinearProgram lp(4);
  lp.objective << -0.75, 150.0, -0.02, 6.0;
  lp.add_inequality(row({0.25, -60.0, -0.04, 9.0}), 0.0);
  lp.add_inequality(row({0.5, -90.0, -0.02, 3.0}), 0.0);
  lp.add_inequality(row({0.0, 0.0, 1.0, 0.0}), 1.0);
  for (int j = 0; j < 4; ++j) lp.set_lower(j, 0.0);
  const auto sol = ehz::lp::solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(-0.05));
}
