#include "ehz/curves.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "combinatorics.hpp"
#include "ehz/errors.hpp"
#include "ehz/lp.hpp"

namespace ehz {

namespace {

double point_scale(std::span<const Vec> points) {
  double s = 1.0;
  for (const auto& p : points) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

double distance_to_segment(const Vec& x, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (x - a).norm();
  const double s = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
  return (x - (a + s * ab)).norm();
}

// Index of the first point violating canonical form, or size() if none.
std::size_t first_violation(const PointSeq& pts, double tol) {
  const std::size_t m = pts.size();
  for (std::size_t j = 0; j < m; ++j) {
    if ((pts[j] - pts[(j + 1) % m]).norm() <= tol) return j;
  }
  if (m < 3) return m;
  for (std::size_t j = 0; j < m; ++j) {
    const Vec& prev = pts[(j + m - 1) % m];
    const Vec& next = pts[(j + 1) % m];
    if (distance_to_segment(pts[j], prev, next) <= tol) return j;
  }
  return m;
}

void require_same_dim(std::span<const Vec> points, int dim) {
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "curve point has the wrong dimension");
  }
}

}  // namespace

ClosedPolygonalCurve::ClosedPolygonalCurve(PointSeq points) : points_(std::move(points)) {
  if (points_.size() < 2) throw Error(ErrorCode::kInvalidArgument, "a closed curve needs at least two points");
  require_same_dim(points_, static_cast<int>(points_.front().size()));
  const std::size_t bad = first_violation(points_, kGeomTol * point_scale(points_));
  if (bad != points_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "curve is not canonical at point " + std::to_string(bad) + " (duplicate or collinear)");
  }
}

bool ClosedPolygonalCurve::same_cycle(const ClosedPolygonalCurve& other, double tol) const {
  if (other.size() != size() || other.dim() != dim()) return false;
  const std::size_t m = size();
  for (std::size_t shift = 0; shift < m; ++shift) {
    bool all = true;
    for (std::size_t j = 0; j < m && all; ++j) {
      all = (points_[j] - other.points_[(j + shift) % m]).cwiseAbs().maxCoeff() <= tol;
    }
    if (all) return true;
  }
  return false;
}

ClosedPolygonalCurve canonicalize(const PointSeq& raw) {
  if (raw.empty()) throw Error(ErrorCode::kCurveCollapses, "empty point sequence");
  require_same_dim(raw, static_cast<int>(raw.front().size()));
  const double tol = kGeomTol * point_scale(raw);
  PointSeq pts = raw;
  for (;;) {
    if (pts.size() < 2) break;
    const std::size_t bad = first_violation(pts, tol);
    if (bad == pts.size()) break;
    pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(bad));
  }
  if (pts.size() < 2 || (pts.size() == 2 && (pts[0] - pts[1]).norm() <= tol)) {
    throw Error(ErrorCode::kCurveCollapses, "curve collapses to fewer than two distinct points");
  }
  return ClosedPolygonalCurve(std::move(pts));
}

double closed_support_length(const ConvexPolytope& length_body, std::span<const Vec> points) {
  require_same_dim(points, length_body.dim());
  const std::size_t m = points.size();
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    total += support_value(length_body, points[(j + 1) % m] - points[j]);
  }
  return total;
}

double length_ellT(const ConvexPolytope& length_body, std::span<const Vec> points) {
  if (!origin_interior(length_body)) {
    throw Error(ErrorCode::kOriginNotInterior, "length body must contain the origin in its interior");
  }
  return closed_support_length(length_body, points);
}

FcpCertificate fcp_certificate(const ConvexPolytope& body, std::span<const Vec> points, double tol) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "empty curve");
  require_same_dim(points, body.dim());
  const int n = body.dim();
  // Only the outermost point per facet can bind, so one row per facet.
  lp::LinearProgram prog(n + 1);
  prog.objective[n] = -1.0;
  for (const auto& f : body.facets()) {
    double reach = -lp::kInf;
    for (const auto& q : points) reach = std::max(reach, f.normal.dot(q));
    Eigen::RowVectorXd row(n + 1);
    row.head(n) = f.normal.transpose();
    row[n] = 1.0;
    prog.add_inequality(row, f.offset - reach);
  }
  const auto sol = lp::solve(prog);
  if (!sol.optimal()) throw Error(ErrorCode::kNumericalFailure, "max-margin LP did not solve");
  FcpCertificate cert;
  cert.margin = sol.x[n];
  cert.translation = sol.x.head(n);
  for (auto i : sol.active_set) cert.active_facets.push_back(static_cast<std::size_t>(i));
  cert.in_F = cert.margin <= tol;
  return cert;
}

double discrete_action(std::span<const Vec> q, std::span<const Vec> p) {
  if (q.size() != p.size()) {
    throw Error(ErrorCode::kLengthMismatch, "curve and dual sequence have different lengths");
  }
  const std::size_t m = q.size();
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (q[j].size() != p[j].size()) throw Error(ErrorCode::kDimensionMismatch, "action dimension mismatch");
    total += (q[(j + 1) % m] - q[j]).dot(p[j]);
  }
  return total;
}

PointSeq reversed(std::span<const Vec> points) { return PointSeq(points.rbegin(), points.rend()); }

ClosedPolygonalCurve reduce_to_n_plus_1(const ConvexPolytope& body, const ConvexPolytope& length_body,
                                        const ClosedPolygonalCurve& q, double tol) {
  if (q.dim() != body.dim() || length_body.dim() != body.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "curve and bodies have different dimensions");
  }
  const auto max_size = static_cast<std::size_t>(body.dim()) + 1;
  if (q.size() <= max_size) return q;
  if (!fcp_certificate(body, q, tol).in_F) {
    throw Error(ErrorCode::kInvalidArgument, "curve can be translated into the interior; nothing to reduce");
  }

  std::optional<ClosedPolygonalCurve> best;
  double best_len = lp::kInf;
  for (std::size_t k = max_size; k >= 2; --k) {
    detail::for_each_subset(q.size(), k, [&](const std::vector<std::size_t>& idx) {
      PointSeq sub;
      for (auto i : idx) sub.push_back(q[i]);
      try {
        ClosedPolygonalCurve c = canonicalize(sub);
        if (!fcp_certificate(body, c, tol).in_F) return true;
        const double len = closed_support_length(length_body, c.points());
        if (!best || len < best_len - 1e-12 * (1.0 + std::abs(best_len))) {
          best_len = len;
          best = std::move(c);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kCurveCollapses) throw;
      }
      return true;
    });
  }
  if (!best) {
    throw Error(ErrorCode::kNoValidSubselection, "no sub-curve with at most n+1 points cannot be translated inward");
  }
  return *best;
}

}  // namespace ehz
