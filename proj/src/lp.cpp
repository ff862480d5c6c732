#include "ehz/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ehz/errors.hpp"

namespace ehz::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;
constexpr double kPhaseOneTol = 1e-9;
constexpr double kHarrisSlack = 1e-11;
constexpr double kFeasibilityCheck = 1e-7;
constexpr std::size_t kMaxPivots = 200000;

// One column of the standard form maps back to an original variable as
// x[var] = shift + sign * y.
struct ColumnMap {
  Eigen::Index var;
  double sign;
};

struct StandardForm {
  Eigen::MatrixXd matrix;  // rows x (structural + slack + artificial)
  Eigen::VectorXd rhs;
  Eigen::VectorXd cost;    // phase-two cost over all columns
  Eigen::Index num_structural = 0;
  Eigen::Index num_slack = 0;
  std::vector<ColumnMap> columns;
  std::vector<double> flip;  // +1 or -1 per row
  std::vector<Eigen::Index> slack_of_row;  // -1 for equalities
  Eigen::VectorXd shift;     // per original variable
};

StandardForm build_standard_form(const LinearProgram& lp) {
  const Eigen::Index n = lp.num_vars();
  StandardForm sf;
  sf.shift = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Index> upper_rows;  // original variables with an explicit upper row
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = lp.lower.empty() ? -kInf : lp.lower[j];
    const double hi = lp.upper.empty() ? kInf : lp.upper[j];
    if (std::isfinite(lo)) {
      sf.shift[j] = lo;
      sf.columns.push_back({j, 1.0});
      if (std::isfinite(hi)) upper_rows.push_back(j);
    } else if (std::isfinite(hi)) {
      sf.shift[j] = hi;
      sf.columns.push_back({j, -1.0});
    } else {
      sf.columns.push_back({j, 1.0});
      sf.columns.push_back({j, -1.0});
    }
  }
  sf.num_structural = static_cast<Eigen::Index>(sf.columns.size());

  const Eigen::Index m_ineq = lp.ineq_matrix.rows();
  const Eigen::Index m_eq = lp.eq_matrix.rows();
  const Eigen::Index m_up = static_cast<Eigen::Index>(upper_rows.size());
  const Eigen::Index rows = m_ineq + m_eq + m_up;
  sf.num_slack = m_ineq + m_up;

  const Eigen::Index total_cols = sf.num_structural + sf.num_slack + rows;
  sf.matrix = Eigen::MatrixXd::Zero(rows, total_cols);
  sf.rhs = Eigen::VectorXd::Zero(rows);
  sf.cost = Eigen::VectorXd::Zero(total_cols);
  sf.flip.assign(static_cast<std::size_t>(rows), 1.0);
  sf.slack_of_row.assign(static_cast<std::size_t>(rows), -1);

  auto fill_row = [&](Eigen::Index r, const Eigen::Ref<const Eigen::RowVectorXd>& row, double rhs) {
    double adjusted = rhs - row.dot(sf.shift);
    for (Eigen::Index c = 0; c < sf.num_structural; ++c) {
      const auto& cm = sf.columns[static_cast<std::size_t>(c)];
      sf.matrix(r, c) = cm.sign * row[cm.var];
    }
    sf.rhs[r] = adjusted;
  };

  Eigen::Index r = 0;
  Eigen::Index slack = sf.num_structural;
  for (Eigen::Index i = 0; i < m_ineq; ++i, ++r) {
    fill_row(r, lp.ineq_matrix.row(i), lp.ineq_rhs[i]);
    sf.matrix(r, slack) = 1.0;
    sf.slack_of_row[static_cast<std::size_t>(r)] = slack++;
  }
  for (Eigen::Index i = 0; i < m_eq; ++i, ++r) {
    fill_row(r, lp.eq_matrix.row(i), lp.eq_rhs[i]);
  }
  for (Eigen::Index j : upper_rows) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    row[j] = 1.0;
    fill_row(r, row, lp.upper[static_cast<std::size_t>(j)]);
    sf.matrix(r, slack) = 1.0;
    sf.slack_of_row[static_cast<std::size_t>(r)] = slack++;
    ++r;
  }

  for (Eigen::Index i = 0; i < rows; ++i) {
    if (sf.rhs[i] < 0.0) {
      sf.matrix.row(i) *= -1.0;
      sf.rhs[i] = -sf.rhs[i];
      sf.flip[static_cast<std::size_t>(i)] = -1.0;
    }
    sf.matrix(i, sf.num_structural + sf.num_slack + i) = 1.0;  // artificial
  }

  for (Eigen::Index c = 0; c < sf.num_structural; ++c) {
    const auto& cm = sf.columns[static_cast<std::size_t>(c)];
    sf.cost[c] = cm.sign * lp.objective[cm.var];
  }
  return sf;
}

class Tableau {
 public:
  Tableau(const StandardForm& sf, std::vector<Eigen::Index> basis)
      : sf_(sf), rows_(sf.matrix.rows()), cols_(sf.matrix.cols()), basis_(std::move(basis)) {
    table_.resize(rows_ + 1, cols_ + 1);
    table_.topLeftCorner(rows_, cols_) = sf.matrix;
    table_.topRightCorner(rows_, 1) = sf.rhs;
    table_.row(rows_).setZero();
    // Initial basis columns are unit columns (slack +1 or artificial), so the
    // tableau is already in canonical form.
  }

  // Rebuilds the constraint rows from the original data and the current basis,
  // discarding accumulated round-off; the cost row is rebuilt from `cost_`.
  void refactor() {
    since_refactor_ = 0;
    if (rows_ == 0) return;
    Eigen::MatrixXd basis_matrix(rows_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) basis_matrix.col(i) = sf_.matrix.col(basis_[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    table_.topLeftCorner(rows_, cols_) = lu.solve(sf_.matrix);
    table_.topRightCorner(rows_, 1) = lu.solve(sf_.rhs).cwiseMax(0.0);
    for (Eigen::Index i = 0; i < rows_; ++i) table_(i, basis_[static_cast<std::size_t>(i)]) = 1.0;
    set_cost(cost_);
  }

  void set_cost(const Eigen::VectorXd& cost) {
    cost_ = cost;
    table_.row(rows_).head(cols_) = cost.transpose();
    table_(rows_, cols_) = 0.0;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[static_cast<std::size_t>(i)]];
      if (cb != 0.0) table_.row(rows_) -= cb * table_.row(i);
    }
  }

  // Runs Bland's rule over columns [0, allowed_cols). Returns false if unbounded.
  bool optimize(Eigen::Index allowed_cols, std::size_t& pivots) {
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (table_(rows_, j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      // Harris two-pass ratio test: bound the step with a small feasibility
      // slack, then take the largest pivot element under that bound (lowest
      // basis index on exact ties). Large pivots keep round-off in check.
      double bound = kInf;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const double a = table_(i, enter);
        if (a > kPivotTol) bound = std::min(bound, (std::max(table_(i, cols_), 0.0) + kHarrisSlack) / a);
      }
      Eigen::Index leave = -1;
      for (Eigen::Index i = 0; i < rows_ && std::isfinite(bound); ++i) {
        const double a = table_(i, enter);
        if (a <= kPivotTol || std::max(table_(i, cols_), 0.0) / a > bound) continue;
        if (leave < 0 || a > table_(leave, enter) ||
            (a == table_(leave, enter) &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      if (++since_refactor_ >= kRefactorEvery) refactor();
      if (++pivots > kMaxPivots) {
        throw Error(ErrorCode::kNumericalFailure, "simplex exceeded the pivot limit");
      }
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    table_.row(r) /= table_(r, c);
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double factor = table_(i, c);
      if (factor != 0.0) table_.row(i) -= factor * table_.row(r);
    }
    table_(r, c) = 1.0;
    basis_[static_cast<std::size_t>(r)] = c;
  }

  double objective_value() const { return -table_(rows_, cols_); }
  double entry(Eigen::Index i, Eigen::Index j) const { return table_(i, j); }
  const std::vector<Eigen::Index>& basis() const { return basis_; }

 private:
  static constexpr std::size_t kRefactorEvery = 32;

  const StandardForm& sf_;
  Eigen::VectorXd cost_;
  std::size_t since_refactor_ = 0;
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::vector<Eigen::Index> basis_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> table_;
};

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

LinearProgram::LinearProgram(Eigen::Index num_vars)
    : objective(Eigen::VectorXd::Zero(num_vars)),
      ineq_matrix(0, num_vars),
      ineq_rhs(0),
      eq_matrix(0, num_vars),
      eq_rhs(0) {}

Eigen::Index LinearProgram::add_inequality(const Eigen::Ref<const Eigen::RowVectorXd>& row, double rhs) {
  if (row.size() != num_vars()) {
    throw Error(ErrorCode::kInvalidArgument, "inequality row has the wrong length");
  }
  const Eigen::Index r = ineq_matrix.rows();
  ineq_matrix.conservativeResize(r + 1, num_vars());
  ineq_rhs.conservativeResize(r + 1);
  ineq_matrix.row(r) = row;
  ineq_rhs[r] = rhs;
  return r;
}

Eigen::Index LinearProgram::add_equality(const Eigen::Ref<const Eigen::RowVectorXd>& row, double rhs) {
  if (row.size() != num_vars()) {
    throw Error(ErrorCode::kInvalidArgument, "equality row has the wrong length");
  }
  const Eigen::Index r = eq_matrix.rows();
  eq_matrix.conservativeResize(r + 1, num_vars());
  eq_rhs.conservativeResize(r + 1);
  eq_matrix.row(r) = row;
  eq_rhs[r] = rhs;
  return r;
}

void LinearProgram::set_lower(Eigen::Index var, double value) {
  if (lower.empty()) lower.assign(static_cast<std::size_t>(num_vars()), -kInf);
  lower.at(static_cast<std::size_t>(var)) = value;
}

void LinearProgram::set_upper(Eigen::Index var, double value) {
  if (upper.empty()) upper.assign(static_cast<std::size_t>(num_vars()), kInf);
  upper.at(static_cast<std::size_t>(var)) = value;
}

void LinearProgram::validate() const {
  const Eigen::Index n = num_vars();
  if (ineq_matrix.cols() != n || eq_matrix.cols() != n || ineq_matrix.rows() != ineq_rhs.size() ||
      eq_matrix.rows() != eq_rhs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "linear program has inconsistent dimensions");
  }
  if ((!lower.empty() && static_cast<Eigen::Index>(lower.size()) != n) ||
      (!upper.empty() && static_cast<Eigen::Index>(upper.size()) != n)) {
    throw Error(ErrorCode::kInvalidArgument, "variable bounds have the wrong length");
  }
  if (!objective.allFinite() || !ineq_matrix.allFinite() || !ineq_rhs.allFinite() ||
      !eq_matrix.allFinite() || !eq_rhs.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "linear program has non-finite coefficients");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = lower.empty() ? -kInf : lower[static_cast<std::size_t>(j)];
    const double hi = upper.empty() ? kInf : upper[static_cast<std::size_t>(j)];
    if (std::isnan(lo) || std::isnan(hi) || lo == kInf || hi == -kInf) {
      throw Error(ErrorCode::kInvalidArgument, "invalid variable bound");
    }
  }
}

const char* to_string(Status status) noexcept {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

Solution solve(const LinearProgram& lp) {
  lp.validate();
  const Eigen::Index n = lp.num_vars();
  Solution sol;

  // Trivially infeasible bounds.
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!lp.lower.empty() && !lp.upper.empty() &&
        lp.lower[static_cast<std::size_t>(j)] > lp.upper[static_cast<std::size_t>(j)]) {
      sol.status = Status::kInfeasible;
      return sol;
    }
  }

  const StandardForm sf = build_standard_form(lp);
  const Eigen::Index rows = sf.matrix.rows();
  const Eigen::Index art0 = sf.num_structural + sf.num_slack;
  const Eigen::Index total = sf.matrix.cols();

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  bool need_phase_one = false;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index s = sf.slack_of_row[static_cast<std::size_t>(i)];
    if (s >= 0 && sf.flip[static_cast<std::size_t>(i)] > 0.0) {
      basis[static_cast<std::size_t>(i)] = s;
    } else {
      basis[static_cast<std::size_t>(i)] = art0 + i;
      need_phase_one = true;
    }
  }

  Tableau tab(sf, basis);
  if (need_phase_one) {
    Eigen::VectorXd phase_one = Eigen::VectorXd::Zero(total);
    phase_one.tail(rows).setOnes();
    tab.set_cost(phase_one);
    tab.optimize(total, sol.pivots);
    tab.refactor();
    if (tab.objective_value() > kPhaseOneTol * (1.0 + inf_norm(sf.rhs))) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    // Drive zero-valued artificials out of the basis where possible; rows where
    // that fails are linearly dependent and keep their artificial at zero.
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < art0) continue;
      for (Eigen::Index j = 0; j < art0; ++j) {
        if (std::abs(tab.entry(i, j)) > kPivotTol) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  tab.set_cost(sf.cost);
  if (!tab.optimize(art0, sol.pivots)) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  // Recompute the basic solution and the duals from the original columns so
  // that accumulated tableau round-off does not leak into the results.
  Eigen::MatrixXd basis_matrix(rows, rows);
  Eigen::VectorXd basis_cost(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index c = tab.basis()[static_cast<std::size_t>(i)];
    basis_matrix.col(i) = sf.matrix.col(c);
    basis_cost[i] = sf.cost[c];
  }
  Eigen::VectorXd y_std = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd x_std = Eigen::VectorXd::Zero(total);
  if (rows > 0) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    const Eigen::VectorXd xb = lu.solve(sf.rhs);
    y_std = lu.transpose().solve(basis_cost);
    for (Eigen::Index i = 0; i < rows; ++i) {
      x_std[tab.basis()[static_cast<std::size_t>(i)]] = std::max(xb[i], 0.0);
    }
  }

  sol.x = sf.shift;
  for (Eigen::Index c = 0; c < sf.num_structural; ++c) {
    const auto& cm = sf.columns[static_cast<std::size_t>(c)];
    sol.x[cm.var] += cm.sign * x_std[c];
  }

  const Eigen::Index m_ineq = lp.ineq_matrix.rows();
  const Eigen::Index m_eq = lp.eq_matrix.rows();
  sol.ineq_duals.resize(m_ineq);
  sol.eq_duals.resize(m_eq);
  for (Eigen::Index i = 0; i < m_ineq; ++i) {
    sol.ineq_duals[i] = std::max(0.0, -sf.flip[static_cast<std::size_t>(i)] * y_std[i]);
  }
  for (Eigen::Index i = 0; i < m_eq; ++i) {
    sol.eq_duals[i] = -sf.flip[static_cast<std::size_t>(m_ineq + i)] * y_std[m_ineq + i];
  }
  sol.reduced_costs = lp.objective;
  if (m_ineq > 0) sol.reduced_costs += lp.ineq_matrix.transpose() * sol.ineq_duals;
  if (m_eq > 0) sol.reduced_costs += lp.eq_matrix.transpose() * sol.eq_duals;
  sol.objective = lp.objective.dot(sol.x);

  // Certify primal feasibility of what is about to be returned.
  const double scale = 1.0 + std::max(inf_norm(lp.ineq_rhs), inf_norm(lp.eq_rhs));
  if (m_ineq > 0) {
    const Eigen::VectorXd viol = lp.ineq_matrix * sol.x - lp.ineq_rhs;
    if (viol.maxCoeff() > kFeasibilityCheck * scale) {
      throw Error(ErrorCode::kNumericalFailure,
                  "simplex basis violates an inequality by " + std::to_string(viol.maxCoeff()));
    }
    for (Eigen::Index i = 0; i < m_ineq; ++i) {
      const double row_norm = std::max(1.0, lp.ineq_matrix.row(i).norm());
      if (-viol[i] <= 1e-9 * row_norm) sol.active_set.push_back(i);
    }
  }
  if (m_eq > 0) {
    const double err = inf_norm(lp.eq_matrix * sol.x - lp.eq_rhs);
    if (err > kFeasibilityCheck * scale) {
      throw Error(ErrorCode::kNumericalFailure,
                  "simplex basis violates an equality by " + std::to_string(err));
    }
  }
  sol.status = Status::kOptimal;
  return sol;
}

}  // namespace ehz::lp
