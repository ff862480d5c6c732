#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace ehz::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize  c^T x
/// s.t.      A x <= b,   E x = f,   lower <= x <= upper.
///
/// Bounds default to (-inf, +inf); leave `lower`/`upper` empty for free
/// variables. Finite lower bounds are cheaper than free variables because the
/// solver does not have to split them.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd ineq_matrix;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LinearProgram(Eigen::Index num_vars = 0);

  Eigen::Index num_vars() const { return objective.size(); }

  /// Appends `row · x <= rhs` and returns its index among the inequalities.
  Eigen::Index add_inequality(const Eigen::Ref<const Eigen::RowVectorXd>& row, double rhs);
  /// Appends `row · x == rhs` and returns its index among the equalities.
  Eigen::Index add_equality(const Eigen::Ref<const Eigen::RowVectorXd>& row, double rhs);
  void set_lower(Eigen::Index var, double value);
  void set_upper(Eigen::Index var, double value);

  /// Throws kInvalidArgument on inconsistent shapes or non-finite data.
  void validate() const;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status status) noexcept;

/// Multipliers follow the convention
///   c + A^T ineq_duals + E^T eq_duals = reduced_costs,   ineq_duals >= 0,
/// with reduced_costs the bound multipliers (zero on free variables,
/// >= 0 at an active lower bound, <= 0 at an active upper bound).
struct Solution {
  Status status = Status::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd ineq_duals;
  Eigen::VectorXd eq_duals;
  Eigen::VectorXd reduced_costs;
  /// Inequalities with slack below 1e-9 (scaled by the row norm).
  std::vector<Eigen::Index> active_set;
  std::size_t pivots = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

/// Dense two-phase primal simplex with Bland's rule. Deterministic for a fixed
/// input. Throws Error(kNumericalFailure) when the final basis does not
/// reproduce a feasible point to 1e-7.
Solution solve(const LinearProgram& lp);

}  // namespace ehz::lp
