#include <algorithm>
#include <cmath>

#include "ehz/errors.hpp"
#include "ehz/geometry.hpp"
#include "ehz/lp.hpp"

namespace ehz {

namespace {

void require_dim(const ConvexPolytope& body, const Vec& v) {
  if (v.size() != body.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector of dimension " + std::to_string(v.size()) + " against body of dimension " +
                    std::to_string(body.dim()));
  }
}

void require_origin_interior(const ConvexPolytope& body) {
  if (!origin_interior(body)) {
    throw Error(ErrorCode::kOriginNotInterior, "the origin is not in the interior of the body");
  }
}

}  // namespace

const char* to_string(Location loc) noexcept {
  switch (loc) {
    case Location::kInterior: return "interior";
    case Location::kBoundary: return "boundary";
    case Location::kOutside: return "outside";
  }
  return "unknown";
}

SupportValue support_function(const ConvexPolytope& body, const Vec& direction) {
  require_dim(body, direction);
  SupportValue out;
  out.value = -lp::kInf;
  for (const auto& w : body.vertices()) out.value = std::max(out.value, direction.dot(w));
  for (std::size_t k = 0; k < body.num_vertices(); ++k) {
    if (direction.dot(body.vertices()[k]) >= out.value - kGeomTol) out.argmax_vertices.push_back(k);
  }
  return out;
}

double support_value(const ConvexPolytope& body, const Vec& direction) {
  double best = -lp::kInf;
  for (const auto& w : body.vertices()) best = std::max(best, direction.dot(w));
  return best;
}

bool origin_interior(const ConvexPolytope& body, double tol) {
  return std::all_of(body.facets().begin(), body.facets().end(), [&](const Facet& f) { return f.offset > tol; });
}

double minkowski_functional(const ConvexPolytope& body, const Vec& x) {
  require_dim(body, x);
  require_origin_interior(body);
  double s = 0.0;
  for (const auto& f : body.facets()) s = std::max(s, f.normal.dot(x) / f.offset);
  return s;
}

ConvexPolytope polar(const ConvexPolytope& body) {
  require_origin_interior(body);
  std::vector<Vec> normals;
  std::vector<double> offsets;
  for (const auto& w : body.vertices()) {
    normals.push_back(w);
    offsets.push_back(1.0);
  }
  return ConvexPolytope::from_halfspaces(normals, offsets);
}

Location contains(const ConvexPolytope& body, const Vec& x, double tol) {
  require_dim(body, x);
  bool interior = true;
  for (const auto& f : body.facets()) {
    const double val = f.normal.dot(x);
    if (val > f.offset + tol) return Location::kOutside;
    if (val > f.offset - tol) interior = false;
  }
  return interior ? Location::kInterior : Location::kBoundary;
}

std::vector<std::size_t> active_facets(const ConvexPolytope& body, const Vec& x, double tol) {
  require_dim(body, x);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < body.num_facets(); ++i) {
    const auto& f = body.facets()[i];
    if (std::abs(f.normal.dot(x) - f.offset) <= tol) out.push_back(i);
  }
  return out;
}

Cone normal_cone(const ConvexPolytope& body, const Vec& x, double tol) {
  if (contains(body, x, tol) == Location::kOutside) {
    throw Error(ErrorCode::kPointOutsideBody, "normal cone requested at a point outside the body");
  }
  Cone cone;
  for (std::size_t i : active_facets(body, x, tol)) cone.generators.push_back(body.facets()[i].normal);
  return cone;
}

double cone_residual(const Cone& cone, const Vec& v) {
  if (cone.trivial()) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  const auto n = v.size();
  const auto k = static_cast<Eigen::Index>(cone.generators.size());
  // Variables: lambda (k, >= 0), r (1, >= 0).  |v - G lambda|_i <= r.
  lp::LinearProgram prog(k + 1);
  prog.objective[k] = 1.0;
  for (Eigen::Index j = 0; j <= k; ++j) prog.set_lower(j, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(k + 1);
    for (Eigen::Index j = 0; j < k; ++j) row[j] = cone.generators[static_cast<std::size_t>(j)][i];
    row[k] = -1.0;
    prog.add_inequality(row, v[i]);   //  G lambda - r <= v
    row.head(k) *= -1.0;
    prog.add_inequality(row, -v[i]);  // -G lambda - r <= -v
  }
  const auto sol = lp::solve(prog);
  if (!sol.optimal()) throw Error(ErrorCode::kNumericalFailure, "cone residual LP did not solve");
  return std::max(0.0, sol.x[k]);
}

bool cone_contains(const Cone& cone, const Vec& v, double tol) {
  return cone_residual(cone, v) <= tol * (1.0 + v.norm());
}

Vec project_onto_hull(const PointSeq& points, const Vec& x) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "projection onto an empty hull");
  // Minimum-norm point of conv(points - x).
  std::vector<Vec> shifted;
  shifted.reserve(points.size());
  double scale = 1e-300;
  for (const auto& p : points) {
    if (p.size() != x.size()) throw Error(ErrorCode::kDimensionMismatch, "projection dimension mismatch");
    shifted.push_back(p - x);
    scale = std::max(scale, shifted.back().squaredNorm());
  }
  const double tol = 1e-15 * scale;

  std::size_t start = 0;
  for (std::size_t i = 1; i < shifted.size(); ++i) {
    if (shifted[i].squaredNorm() < shifted[start].squaredNorm()) start = i;
  }
  std::vector<std::size_t> corral{start};
  std::vector<double> weights{1.0};
  Vec y = shifted[start];

  for (int major = 0; major < 1000; ++major) {
    std::size_t best = 0;
    double best_val = lp::kInf;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      const double val = y.dot(shifted[i]);
      if (val < best_val) {
        best_val = val;
        best = i;
      }
    }
    if (y.squaredNorm() - best_val <= 1e-12 * scale ||
        std::find(corral.begin(), corral.end(), best) != corral.end()) {
      break;
    }
    corral.push_back(best);
    weights.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      // Affine minimizer: [P^T P 1; 1^T 0][alpha; mu] = [0; 1].
      const auto k = static_cast<Eigen::Index>(corral.size());
      Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
          sys(a, b) = shifted[corral[static_cast<std::size_t>(a)]].dot(shifted[corral[static_cast<std::size_t>(b)]]);
        }
        sys(a, k) = 1.0;
        sys(k, a) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs[k] = 1.0;
      const Eigen::VectorXd sol = sys.completeOrthogonalDecomposition().solve(rhs);
      const Eigen::VectorXd alpha = sol.head(k);

      if ((alpha.array() > tol).all()) {
        for (Eigen::Index a = 0; a < k; ++a) weights[static_cast<std::size_t>(a)] = alpha[a];
        break;
      }
      double theta = 1.0;
      for (Eigen::Index a = 0; a < k; ++a) {
        const double w = weights[static_cast<std::size_t>(a)];
        if (alpha[a] <= tol && w - alpha[a] > 0.0) theta = std::min(theta, w / (w - alpha[a]));
      }
      std::vector<std::size_t> next_corral;
      std::vector<double> next_weights;
      for (Eigen::Index a = 0; a < k; ++a) {
        const double w = (1.0 - theta) * weights[static_cast<std::size_t>(a)] + theta * alpha[a];
        if (w > tol) {
          next_corral.push_back(corral[static_cast<std::size_t>(a)]);
          next_weights.push_back(w);
        }
      }
      if (next_corral.empty()) {
        next_corral.push_back(corral.back());
        next_weights.push_back(1.0);
      }
      corral = std::move(next_corral);
      weights = std::move(next_weights);
      double total = 0.0;
      for (double w : weights) total += w;
      for (double& w : weights) w /= total;
    }
    y = Vec::Zero(x.size());
    for (std::size_t a = 0; a < corral.size(); ++a) y += weights[a] * shifted[corral[a]];
  }
  return y + x;
}

double distance_to(const ConvexPolytope& body, const Vec& x) {
  require_dim(body, x);
  if (contains(body, x, 0.0) != Location::kOutside) return 0.0;
  return (project_onto_hull(body.vertices(), x) - x).norm();
}

double hausdorff_distance(const ConvexPolytope& a, const ConvexPolytope& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kDimensionMismatch, "Hausdorff distance between different dimensions");
  double d = 0.0;
  for (const auto& v : a.vertices()) d = std::max(d, distance_to(b, v));
  for (const auto& w : b.vertices()) d = std::max(d, distance_to(a, w));
  return d;
}

ChebyshevBall chebyshev_ball(const ConvexPolytope& body) {
  const int n = body.dim();
  lp::LinearProgram prog(n + 1);
  prog.objective[n] = -1.0;
  for (const auto& f : body.facets()) {
    Eigen::RowVectorXd row(n + 1);
    row.head(n) = f.normal.transpose();
    row[n] = 1.0;
    prog.add_inequality(row, f.offset);
  }
  const auto sol = lp::solve(prog);
  if (!sol.optimal()) throw Error(ErrorCode::kNumericalFailure, "Chebyshev LP did not solve");
  return {sol.x.head(n), sol.x[n]};
}

}  // namespace ehz
