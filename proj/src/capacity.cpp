#include "ehz/capacity.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "combinatorics.hpp"
#include "ehz/errors.hpp"
#include "ehz/lp.hpp"

namespace ehz {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::size_t resolve_m_max(const ConvexPolytope& table, std::size_t m_max) {
  const auto full = static_cast<std::size_t>(table.dim()) + 1;
  if (m_max == 0) return full;
  if (m_max < 2) throw Error(ErrorCode::kInvalidArgument, "m_max must be at least 2");
  return m_max;
}

void require_same_dim(const ConvexPolytope& a, const ConvexPolytope& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kDimensionMismatch, "bodies have different dimensions");
}

// Variable layout: q_0..q_{m-1} (m*n), then s_0..s_{m-1}.
struct AssignmentLp {
  lp::LinearProgram prog;
  Eigen::Index num_points = 0;
  int dim = 0;
  // epigraph_row[j][k]: inequality index of s_j >= <q_{j+1} - q_j, w_k>
  std::vector<std::vector<Eigen::Index>> epigraph_row;
};

AssignmentLp build_assignment_lp(const ConvexPolytope& table, const ConvexPolytope& length_body,
                                 const FacetAssignment& assignment) {
  const int n = table.dim();
  const auto m = static_cast<Eigen::Index>(assignment.size());
  AssignmentLp out{lp::LinearProgram(m * n + m), m, n, {}};
  auto& prog = out.prog;

  Vec lo = table.vertices().front();
  for (const auto& v : table.vertices()) lo = lo.cwiseMin(v);
  double radius = 0.0;
  for (const auto& w : length_body.vertices()) radius = std::max(radius, w.norm());
  for (Eigen::Index j = 0; j < m; ++j) {
    for (int k = 0; k < n; ++k) prog.set_lower(j * n + k, lo[k] - 1.0);
    // h_T(d) >= -|d| max|w| and |d| <= diam K, so this bound never binds.
    prog.set_lower(m * n + j, -table.diameter() * radius - 1.0);
    prog.objective[m * n + j] = 1.0;
  }

  out.epigraph_row.resize(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index nxt = (j + 1) % m;
    for (const auto& w : length_body.vertices()) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(prog.num_vars());
      row.segment(nxt * n, n) += w.transpose();
      row.segment(j * n, n) -= w.transpose();
      row[m * n + j] = -1.0;
      out.epigraph_row[static_cast<std::size_t>(j)].push_back(prog.add_inequality(row, 0.0));
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    for (const auto& f : table.facets()) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(prog.num_vars());
      row.segment(j * n, n) = f.normal.transpose();
      prog.add_inequality(row, f.offset);
    }
    const Facet& touch = table.facets()[assignment.facets[static_cast<std::size_t>(j)]];
    Eigen::RowVectorXd eq = Eigen::RowVectorXd::Zero(prog.num_vars());
    eq.segment(j * n, n) = touch.normal.transpose();
    prog.add_equality(eq, touch.offset);
  }
  return out;
}

AssignmentSolution read_solution(const AssignmentLp& built, const ConvexPolytope& length_body,
                                 const lp::Solution& sol) {
  const int n = built.dim;
  AssignmentSolution out;
  out.value = 0.0;
  for (Eigen::Index j = 0; j < built.num_points; ++j) {
    out.points.push_back(sol.x.segment(j * n, n));
    out.value += sol.x[built.num_points * n + j];
  }
  // Stationarity in s_j gives sum_k mu_jk = 1, so p_j is a convex combination
  // of the vertices exposed by q_{j+1} - q_j.
  for (Eigen::Index j = 0; j < built.num_points; ++j) {
    Vec p = Vec::Zero(n);
    double mass = 0.0;
    const auto& rows = built.epigraph_row[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const double mu = std::max(0.0, sol.ineq_duals[rows[k]]);
      p += mu * length_body.vertices()[k];
      mass += mu;
    }
    if (mass > 0.0) p /= mass;
    out.momenta.push_back(p);
  }
  return out;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

bool within_tie(double a, double best) { return a <= best + 1e-10 * (1.0 + std::abs(best)); }

// Full enumeration with deterministic reduction; `ties` lists every assignment
// whose value is within the tie tolerance of the minimum, smallest first.
struct CoreSolve {
  double value = lp::kInf;
  std::vector<FacetAssignment> assignments;
  std::vector<AssignmentSolution> solutions;
  std::vector<std::size_t> ties;
  std::size_t winner = 0;
};

CoreSolve solve_core(const ConvexPolytope& table, const ConvexPolytope& length_body, std::size_t m_max,
                     unsigned threads) {
  CoreSolve core;
  core.assignments = enumerate_assignments(table, resolve_m_max(table, m_max));
  core.solutions.resize(core.assignments.size());
  parallel_for(core.assignments.size(), threads, [&](std::size_t i) {
    core.solutions[i] = solve_assignment(table, length_body, core.assignments[i]);
  });
  for (const auto& s : core.solutions) core.value = std::min(core.value, s.value);
  for (std::size_t i = 0; i < core.solutions.size(); ++i) {
    if (within_tie(core.solutions[i].value, core.value)) core.ties.push_back(i);
  }
  std::sort(core.ties.begin(), core.ties.end(),
            [&](std::size_t a, std::size_t b) { return core.assignments[a] < core.assignments[b]; });
  core.winner = core.ties.front();
  return core;
}

struct BilliardCandidate {
  PointSeq q;
  PointSeq p;
  std::string source;
};

bool lengths_match(double a, double b) { return std::abs(a - b) <= 1e-8 * (1.0 + std::abs(b)); }

// Verifies a candidate pair against the optimal value; the dual is moved to
// the centred length body so that it lies on its boundary.
bool accept_candidate(const ConvexPolytope& table, const ConvexPolytope& length_body, double value, double tol,
                      BilliardCandidate& cand, StrongReport& report) {
  if (cand.q.size() != cand.p.size() || cand.q.size() < 2) return false;
  if (!lengths_match(closed_support_length(length_body, cand.q), value)) return false;
  report = verify_strong(table, length_body, cand.q, cand.p, tol);
  return report.passed;
}

std::optional<PointSeq> try_extract(const ConvexPolytope& table, const ConvexPolytope& length_body,
                                    const PointSeq& q, double tol) {
  try {
    return extract_dual(table, length_body, q, tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotABilliard || e.code() == ErrorCode::kPointOffBoundary ||
        e.code() == ErrorCode::kInvalidArgument) {
      return std::nullopt;
    }
    throw;
  }
}

std::optional<ClosedPolygonalCurve> try_canonicalize(const PointSeq& raw) {
  try {
    return canonicalize(raw);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCurveCollapses) return std::nullopt;
    throw;
  }
}

// Other optimal vertices of the winning LP: fix the value and push each
// coordinate of each point to its extremes.
std::vector<PointSeq> alternative_optima(const ConvexPolytope& table, const ConvexPolytope& length_body,
                                         const FacetAssignment& assignment, double value) {
  AssignmentLp built = build_assignment_lp(table, length_body, assignment);
  const int n = built.dim;
  const Eigen::Index m = built.num_points;
  Eigen::RowVectorXd cap = Eigen::RowVectorXd::Zero(built.prog.num_vars());
  cap.tail(m).setOnes();
  built.prog.add_inequality(cap, value + 1e-10 * (1.0 + std::abs(value)));
  std::vector<PointSeq> out;
  for (Eigen::Index var = 0; var < m * n; ++var) {
    for (double sign : {1.0, -1.0}) {
      built.prog.objective.setZero();
      built.prog.objective[var] = sign;
      const auto sol = lp::solve(built.prog);
      if (!sol.optimal()) continue;
      PointSeq pts;
      for (Eigen::Index j = 0; j < m; ++j) pts.push_back(sol.x.segment(j * n, n));
      out.push_back(std::move(pts));
    }
  }
  return out;
}

}  // namespace

double relative_deviation(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

Vec length_shift(const ConvexPolytope& body) {
  if (origin_interior(body)) return Vec::Zero(body.dim());
  return -chebyshev_ball(body).center;
}

ConvexPolytope centered_for_length(const ConvexPolytope& body) {
  if (origin_interior(body)) return body;
  return translate(body, length_shift(body));
}

bool origin_in_normal_hull(const ConvexPolytope& body, const std::vector<std::size_t>& facets) {
  if (facets.empty()) return false;
  const int n = body.dim();
  const auto k = static_cast<Eigen::Index>(facets.size());
  // min sum |residual| over lambda in the simplex; 0 is in the hull iff it is 0.
  lp::LinearProgram prog(k + n);
  for (Eigen::Index i = 0; i < k + n; ++i) prog.set_lower(i, 0.0);
  for (int c = 0; c < n; ++c) prog.objective[k + c] = 1.0;
  for (int c = 0; c < n; ++c) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(k + n);
    for (Eigen::Index i = 0; i < k; ++i) row[i] = body.facets()[facets[static_cast<std::size_t>(i)]].normal[c];
    row[k + c] = -1.0;
    prog.add_inequality(row, 0.0);
    row = -row;
    row[k + c] = -1.0;
    prog.add_inequality(row, 0.0);
  }
  Eigen::RowVectorXd simplex = Eigen::RowVectorXd::Zero(k + n);
  simplex.head(k).setOnes();
  prog.add_equality(simplex, 1.0);
  const auto sol = lp::solve(prog);
  return sol.optimal() && sol.objective <= 1e-9;
}

std::vector<FacetAssignment> enumerate_assignments(const ConvexPolytope& table, std::size_t m_max) {
  m_max = std::min(resolve_m_max(table, m_max), table.num_facets());
  std::vector<FacetAssignment> out;
  for (std::size_t k = 2; k <= m_max; ++k) {
    const std::size_t first = out.size();
    detail::for_each_subset(table.num_facets(), k, [&](const std::vector<std::size_t>& subset) {
      if (!origin_in_normal_hull(table, subset)) return true;
      std::vector<std::size_t> rest(subset.begin() + 1, subset.end());
      do {
        FacetAssignment a;
        a.facets.push_back(subset.front());
        a.facets.insert(a.facets.end(), rest.begin(), rest.end());
        out.push_back(std::move(a));
      } while (std::next_permutation(rest.begin(), rest.end()));
      return true;
    });
    // Subsets come out in lexicographic order but their permutations interleave.
    std::sort(out.end() - static_cast<std::ptrdiff_t>(out.size() - first), out.end());
  }
  return out;
}

AssignmentSolution solve_assignment(const ConvexPolytope& table, const ConvexPolytope& length_body,
                                    const FacetAssignment& assignment) {
  require_same_dim(table, length_body);
  if (assignment.size() < 2) throw Error(ErrorCode::kInvalidArgument, "assignment needs at least two facets");
  for (auto i : assignment.facets) {
    if (i >= table.num_facets()) throw Error(ErrorCode::kInvalidArgument, "assignment facet index out of range");
  }
  const AssignmentLp built = build_assignment_lp(table, length_body, assignment);
  const auto sol = lp::solve(built.prog);
  if (!sol.optimal()) {
    throw Error(ErrorCode::kNumericalFailure,
                std::string("assignment LP ended ") + lp::to_string(sol.status));
  }
  return read_solution(built, length_body, sol);
}

double capacity_value(const ConvexPolytope& table, const ConvexPolytope& length_body, std::size_t m_max) {
  require_same_dim(table, length_body);
  return solve_core(table, centered_for_length(length_body), m_max, 1).value;
}

CapacityResult capacity(const ConvexPolytope& table, const ConvexPolytope& length_body,
                        const CapacityOptions& options) {
  require_same_dim(table, length_body);
  if (!(options.tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  const ConvexPolytope T = centered_for_length(length_body);
  const Vec t_shift = length_shift(length_body);

  auto start = Clock::now();
  const CoreSolve core = solve_core(table, T, options.m_max, options.threads);
  CapacityResult result(core.value, canonicalize(core.solutions[core.winner].points));
  result.timings.primal_ms = elapsed_ms(start);
  result.assignments_solved = core.assignments.size();
  result.assignment = core.assignments[core.winner];
  result.certificate = fcp_certificate(table, result.curve, options.tol);
  result.quantities.min_fcp_K_lengthT = core.value;

  if (auto p = try_extract(table, T, result.curve.points(), options.tol)) {
    if (verify_strong(table, T, result.curve.points(), *p, options.tol).passed) {
      result.dual = *p;
    } else {
      result.dual_diagnostic = "extracted dual failed strong verification";
    }
  } else {
    result.dual_diagnostic = "minimiser admits no dual trajectory (not a strong billiard)";
  }

  std::optional<CoreSolve> sym;
  Vec k_shift = Vec::Zero(table.dim());
  if (options.symmetric) {
    start = Clock::now();
    const ConvexPolytope K_len = centered_for_length(table);
    k_shift = length_shift(table);
    sym = solve_core(length_body, K_len, options.m_max, options.threads);
    result.quantities.min_fcp_T_lengthK = sym->value;
    result.timings.symmetric_ms = elapsed_ms(start);
  }

  if (options.billiard) {
    start = Clock::now();
    std::vector<BilliardCandidate> tried;
    bool found = false;
    StrongReport report;
    auto attempt = [&](BilliardCandidate cand) {
      if (found) return;
      if (accept_candidate(table, T, core.value, options.tol, cand, report)) {
        found = true;
        result.billiard_curve = ClosedPolygonalCurve(cand.q);
        result.billiard_dual = cand.p;
        result.billiard_source = cand.source;
        result.billiard_report = report;
      }
    };
    auto attempt_curve = [&](const PointSeq& raw, const std::string& source) {
      if (found) return;
      auto c = try_canonicalize(raw);
      if (!c || !fcp_certificate(table, *c, options.tol).in_F) return;
      if (auto p = try_extract(table, T, c->points(), options.tol)) attempt({c->points(), *p, source});
    };

    if (result.dual) attempt({result.curve.points(), *result.dual, "minimiser"});
    {
      const auto& raw = core.solutions[core.winner];
      auto c = try_canonicalize(raw.points);
      if (c && c->size() == raw.points.size()) attempt({raw.points, raw.momenta, "lp-multipliers"});
    }
    for (auto i : core.ties) {
      if (i != core.winner) attempt_curve(core.solutions[i].points, "tied-assignment");
    }
    if (sym && !found) {
      // A (T,K) pair (p, r) gives the (K,T) pair q_j = r_{-j}, dual p_{-j}.
      const ConvexPolytope K_len = centered_for_length(table);
      auto reflect = [&](const PointSeq& p_raw, const PointSeq& r_raw, const std::string& source) {
        const std::size_t m = p_raw.size();
        BilliardCandidate cand;
        cand.source = source;
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t src = (m - j) % m;
          cand.q.push_back(r_raw[src] - k_shift);
          cand.p.push_back(p_raw[src] + t_shift);
        }
        attempt(std::move(cand));
      };
      for (auto i : sym->ties) {
        const auto& raw = sym->solutions[i];
        auto c = try_canonicalize(raw.points);
        if (!c) continue;
        if (auto r = try_extract(length_body, K_len, c->points(), options.tol)) reflect(c->points(), *r, "symmetric-dual");
        if (c->size() == raw.points.size()) reflect(raw.points, raw.momenta, "symmetric-multipliers");
        if (found) break;
      }
    }
    for (auto i : core.ties) {
      if (found) break;
      for (const auto& pts : alternative_optima(table, T, core.assignments[i], core.value)) {
        attempt_curve(pts, "alternative-optimum");
        if (found) break;
      }
    }

    if (found) {
      result.quantities.billiard_lengthT = closed_support_length(T, result.billiard_curve->points());
      result.quantities.billiard_dual_lengthMinusK = dual_length(table, *result.billiard_dual);
      result.billiard_weak_report = verify_weak(table, T, result.billiard_curve->points(), options.tol);
    } else {
      result.billiard_source = "none: no candidate of optimal length passed strong verification";
    }
    result.timings.billiard_ms = elapsed_ms(start);
  }

  if (options.oracle_step > 0.0) {
    start = Clock::now();
    result.quantities.oracle = brute_force_oracle(table, T, options.oracle_step, options.m_max);
    result.timings.oracle_ms = elapsed_ms(start);
  }

  const auto& qs = result.quantities;
  for (const auto& v : {qs.min_fcp_T_lengthK, qs.billiard_lengthT, qs.billiard_dual_lengthMinusK}) {
    if (v) result.max_relative_deviation = std::max(result.max_relative_deviation, relative_deviation(*v, result.value));
  }
  result.identities_ok = result.max_relative_deviation <= kIdentityTol;
  return result;
}

IdentityReport theorem_identities(const ConvexPolytope& table, const ConvexPolytope& length_body,
                                  std::size_t m_max) {
  IdentityReport report;
  const ConvexPolytope nk = negate(table);
  const ConvexPolytope nt = negate(length_body);
  report.labels = {"KxT", "TxK", "-KxT", "Kx-T", "-Kx-T"};
  report.values = {capacity_value(table, length_body, m_max), capacity_value(length_body, table, m_max),
                   capacity_value(nk, length_body, m_max), capacity_value(table, nt, m_max),
                   capacity_value(nk, nt, m_max)};
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    for (std::size_t j = i + 1; j < report.values.size(); ++j) {
      report.max_relative_deviation =
          std::max(report.max_relative_deviation, relative_deviation(report.values[i], report.values[j]));
    }
  }
  return report;
}

}  // namespace ehz
