#include "ehz/billiards.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ehz/errors.hpp"
#include "ehz/lp.hpp"

namespace ehz {

namespace {

Vec lower_corner(const ConvexPolytope& body) {
  Vec lo = body.vertices().front();
  for (const auto& v : body.vertices()) lo = lo.cwiseMin(v);
  return lo;
}

double max_radius(const ConvexPolytope& body) {
  double r = 0.0;
  for (const auto& v : body.vertices()) r = std::max(r, v.norm());
  return r;
}

Cone cone_of(const ConvexPolytope& body, const std::vector<std::size_t>& facets) {
  Cone c;
  for (auto i : facets) c.generators.push_back(body.facets()[i].normal);
  return c;
}

void require_pair_dims(const ConvexPolytope& table, const ConvexPolytope& length_body, std::span<const Vec> q) {
  if (table.dim() != length_body.dim()) throw Error(ErrorCode::kDimensionMismatch, "bodies have different dimensions");
  for (const auto& x : q) {
    if (x.size() != table.dim()) throw Error(ErrorCode::kDimensionMismatch, "curve point has the wrong dimension");
  }
  if (q.size() < 2) throw Error(ErrorCode::kInvalidArgument, "a closed curve needs at least two points");
}

// Adds "point block starting at `offset` lies in body" rows.
void add_membership_rows(lp::LinearProgram& prog, const ConvexPolytope& body, Eigen::Index offset) {
  const int n = body.dim();
  for (const auto& f : body.facets()) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(prog.num_vars());
    row.segment(offset, n) = f.normal.transpose();
    prog.add_inequality(row, f.offset);
  }
}

// Adds "<dir, point> >= h_body(dir) - slack", i.e. the point lies on the face
// of `body` exposed by `dir`.
void add_exposed_face_row(lp::LinearProgram& prog, const ConvexPolytope& body, Eigen::Index offset, const Vec& dir) {
  const double h = support_value(body, dir);
  const double slack = 1e-11 * (1.0 + dir.norm() * max_radius(body));
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(prog.num_vars());
  row.segment(offset, dir.size()) = -dir.transpose();
  prog.add_inequality(row, -h + slack);
}

// minimize h(x - prev) + h(next - x) over {x : <normal, x - cur> = 0}.
double minimize_over_hyperplane(const ConvexPolytope& length_body, const Vec& prev, const Vec& cur, const Vec& next,
                                const Vec& normal) {
  const int n = length_body.dim();
  lp::LinearProgram prog(n + 2);
  prog.objective[n] = 1.0;
  prog.objective[n + 1] = 1.0;
  for (const auto& w : length_body.vertices()) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n + 2);
    row.head(n) = w.transpose();
    row[n] = -1.0;
    prog.add_inequality(row, w.dot(prev));
    row.head(n) = -w.transpose();
    row[n] = 0.0;
    row[n + 1] = -1.0;
    prog.add_inequality(row, -w.dot(next));
  }
  Eigen::RowVectorXd eq = Eigen::RowVectorXd::Zero(n + 2);
  eq.head(n) = normal.transpose();
  prog.add_equality(eq, normal.dot(cur));
  const auto sol = lp::solve(prog);
  if (!sol.optimal()) throw Error(ErrorCode::kNumericalFailure, "hyperplane minimisation LP did not solve");
  return sol.objective;
}

}  // namespace

const char* to_string(VerifyFailure f) noexcept {
  switch (f) {
    case VerifyFailure::kNone: return "none";
    case VerifyFailure::kPointOffBoundary: return "point-off-boundary";
    case VerifyFailure::kConeViolation: return "cone-violation";
    case VerifyFailure::kCrossCheck: return "cross-check-disagreement";
  }
  return "unknown";
}

StrongReport verify_strong(const ConvexPolytope& table, const ConvexPolytope& length_body, std::span<const Vec> q,
                           std::span<const Vec> p, double tol) {
  require_pair_dims(table, length_body, q);
  if (p.size() != q.size()) throw Error(ErrorCode::kLengthMismatch, "curve and dual have different lengths");
  for (const auto& x : p) {
    if (x.size() != table.dim()) throw Error(ErrorCode::kDimensionMismatch, "dual point has the wrong dimension");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");

  const std::size_t m = q.size();
  StrongReport report;
  bool off_boundary = false;
  bool cone_fail = false;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t next = (j + 1) % m;
    StrongBounce b;
    b.index = j;
    b.q_location = contains(table, q[j], tol);
    b.p_location = contains(length_body, p[j], tol);
    if (b.q_location != Location::kBoundary || b.p_location != Location::kBoundary) {
      if (!off_boundary) {
        report.message = "bounce " + std::to_string(j) + ": " +
                         (b.q_location != Location::kBoundary ? std::string("q is ") + to_string(b.q_location)
                                                              : std::string("p is ") + to_string(b.p_location));
      }
      off_boundary = true;
    }
    const Vec travel = q[next] - q[j];
    const Vec reflect = p[j] - p[next];
    b.travel_residual = cone_residual(cone_of(length_body, active_facets(length_body, p[j], tol)), travel) /
                        (1.0 + travel.norm());
    b.reflect_residual = cone_residual(cone_of(table, active_facets(table, q[next], tol)), reflect) /
                         (1.0 + reflect.norm());
    b.travel_ok = b.travel_residual <= tol;
    b.reflect_ok = b.reflect_residual <= tol;
    if ((!b.travel_ok || !b.reflect_ok) && !cone_fail && !off_boundary) {
      report.message = "bounce " + std::to_string(j) + ": " +
                       (!b.travel_ok ? "q_{j+1}-q_j not in N_T(p_j)" : "p_{j+1}-p_j not in -N_K(q_{j+1})");
    }
    cone_fail = cone_fail || !b.travel_ok || !b.reflect_ok;
    report.bounces.push_back(b);
  }
  if (off_boundary) {
    report.failure = VerifyFailure::kPointOffBoundary;
  } else if (cone_fail) {
    report.failure = VerifyFailure::kConeViolation;
  }
  report.passed = report.failure == VerifyFailure::kNone;
  return report;
}

PointSeq extract_dual(const ConvexPolytope& table, const ConvexPolytope& length_body, std::span<const Vec> q,
                      double tol) {
  require_pair_dims(table, length_body, q);
  const int n = table.dim();
  const auto m = static_cast<Eigen::Index>(q.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    if (contains(table, q[static_cast<std::size_t>(j)], tol) != Location::kBoundary) {
      throw Error(ErrorCode::kPointOffBoundary, "point " + std::to_string(j) + " is not on the boundary of K");
    }
    if ((q[static_cast<std::size_t>((j + 1) % m)] - q[static_cast<std::size_t>(j)]).norm() <= kGeomTol) {
      throw Error(ErrorCode::kInvalidArgument, "consecutive curve points coincide");
    }
  }

  // Variables: p_0..p_{m-1} (m*n), then kappa_{j,i} >= 0 for facets active at q_{j+1}.
  std::vector<std::vector<std::size_t>> reflect_facets(static_cast<std::size_t>(m));
  Eigen::Index num_kappa = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    reflect_facets[static_cast<std::size_t>(j)] = active_facets(table, q[static_cast<std::size_t>((j + 1) % m)], tol);
    num_kappa += static_cast<Eigen::Index>(reflect_facets[static_cast<std::size_t>(j)].size());
  }
  const Eigen::Index num_p = m * n;
  lp::LinearProgram prog(num_p + num_kappa);
  const Vec lo = lower_corner(length_body);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (int k = 0; k < n; ++k) prog.set_lower(j * n + k, lo[k] - 1.0);
  }
  for (Eigen::Index k = num_p; k < num_p + num_kappa; ++k) prog.set_lower(k, 0.0);

  for (Eigen::Index j = 0; j < m; ++j) {
    add_membership_rows(prog, length_body, j * n);
    const Vec dir = q[static_cast<std::size_t>((j + 1) % m)] - q[static_cast<std::size_t>(j)];
    add_exposed_face_row(prog, length_body, j * n, dir);
  }
  // p_{j+1} - p_j + sum_i kappa_{j,i} a_i = 0
  Eigen::Index kappa = num_p;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index nxt = (j + 1) % m;
    const auto& facets = reflect_facets[static_cast<std::size_t>(j)];
    for (int k = 0; k < n; ++k) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(prog.num_vars());
      row[nxt * n + k] += 1.0;
      row[j * n + k] -= 1.0;
      for (std::size_t f = 0; f < facets.size(); ++f) {
        row[kappa + static_cast<Eigen::Index>(f)] = table.facets()[facets[f]].normal[k];
      }
      prog.add_equality(row, 0.0);
    }
    kappa += static_cast<Eigen::Index>(facets.size());
  }

  Eigen::VectorXd x;
  for (Eigen::Index idx = 0; idx < num_p; ++idx) {
    prog.objective.setZero();
    prog.objective[idx] = 1.0;
    const auto sol = lp::solve(prog);
    if (!sol.optimal()) {
      if (idx == 0) throw Error(ErrorCode::kNotABilliard, "no dual trajectory satisfies the reflection system");
      break;  // round-off in the fixing rows; x is still a feasible dual
    }
    x = sol.x;
    Eigen::RowVectorXd fix = Eigen::RowVectorXd::Zero(prog.num_vars());
    fix[idx] = 1.0;
    prog.add_inequality(fix, sol.x[idx] + 1e-9 * (1.0 + std::abs(sol.x[idx])));
  }

  PointSeq p;
  for (Eigen::Index j = 0; j < m; ++j) p.push_back(x.segment(j * n, n));
  return p;
}

WeakReport verify_weak(const ConvexPolytope& table, const ConvexPolytope& length_body, std::span<const Vec> q,
                       double tol) {
  require_pair_dims(table, length_body, q);
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  const int n = table.dim();
  const std::size_t m = q.size();
  WeakReport report;

  for (std::size_t j = 0; j < m; ++j) {
    if (contains(table, q[j], tol) != Location::kBoundary) {
      report.failure = VerifyFailure::kPointOffBoundary;
      report.message = "bounce " + std::to_string(j) + " is not on the boundary of K";
      report.bounces.clear();
      return report;
    }
  }

  const Vec lo = lower_corner(length_body);
  for (std::size_t j = 0; j < m; ++j) {
    const Vec& prev = q[(j + m - 1) % m];
    const Vec& cur = q[j];
    const Vec& next = q[(j + 1) % m];
    const Vec incoming = cur - prev;
    const Vec outgoing = next - cur;
    const auto active = active_facets(table, cur, tol);
    const auto k = static_cast<Eigen::Index>(active.size());

    WeakBounce b;
    b.index = j;
    b.value_at_bounce = support_value(length_body, incoming) + support_value(length_body, outgoing);

    // u in face(incoming), v in face(outgoing), u - v = sigma * sum beta_i a_i.
    for (int sigma : {1, -1}) {
      lp::LinearProgram prog(2 * n + k);
      for (int c = 0; c < n; ++c) {
        prog.set_lower(c, lo[c] - 1.0);
        prog.set_lower(n + c, lo[c] - 1.0);
      }
      for (Eigen::Index c = 0; c < k; ++c) prog.set_lower(2 * n + c, 0.0);
      add_membership_rows(prog, length_body, 0);
      add_membership_rows(prog, length_body, n);
      add_exposed_face_row(prog, length_body, 0, incoming);
      add_exposed_face_row(prog, length_body, n, outgoing);
      for (int c = 0; c < n; ++c) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(prog.num_vars());
        row[c] = 1.0;
        row[n + c] = -1.0;
        for (Eigen::Index g = 0; g < k; ++g) {
          row[2 * n + g] = -sigma * table.facets()[active[static_cast<std::size_t>(g)]].normal[c];
        }
        prog.add_equality(row, 0.0);
      }
      const auto sol = lp::solve(prog);
      if (!sol.optimal()) continue;
      Vec normal = Vec::Zero(n);
      for (Eigen::Index g = 0; g < k; ++g) {
        normal += sol.x[2 * n + g] * table.facets()[active[static_cast<std::size_t>(g)]].normal;
      }
      if (normal.norm() <= 1e-12) normal = table.facets()[active.front()].normal;
      b.hyperplane_normal = normal.normalized();
      b.orientation = sigma;
      b.first_order_ok = true;
      break;
    }
    if (!b.first_order_ok) b.hyperplane_normal = table.facets()[active.front()].normal;

    b.direct_minimum = minimize_over_hyperplane(length_body, prev, cur, next, b.hyperplane_normal);
    const bool minimal_here = b.value_at_bounce <= b.direct_minimum + tol * (1.0 + std::abs(b.value_at_bounce));
    b.cross_check_ok = b.first_order_ok == minimal_here;
    b.ok = b.first_order_ok && minimal_here;

    if (!b.ok && report.failure == VerifyFailure::kNone) {
      report.failure = b.cross_check_ok ? VerifyFailure::kConeViolation : VerifyFailure::kCrossCheck;
      report.message = "bounce " + std::to_string(j) +
                       (b.cross_check_ok ? ": no supporting hyperplane satisfies the least-action rule"
                                         : ": subgradient condition and direct minimisation disagree");
    }
    report.bounces.push_back(std::move(b));
  }
  report.passed = report.failure == VerifyFailure::kNone;
  return report;
}

double dual_length(const ConvexPolytope& table, std::span<const Vec> p) {
  const std::size_t m = p.size();
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) total += support_value(table, p[j] - p[(j + 1) % m]);
  return total;
}

}  // namespace ehz
