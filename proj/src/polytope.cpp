#include <algorithm>
#include <cmath>
#include <string>

#include "combinatorics.hpp"
#include "ehz/errors.hpp"
#include "ehz/geometry.hpp"
#include "ehz/lp.hpp"

namespace ehz {

namespace {

double coordinate_scale(const PointSeq& points) {
  double s = 1.0;
  for (const auto& p : points) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

// Affine rank of a point set (dimension of its affine hull).
int affine_rank(const PointSeq& points, const std::vector<std::size_t>& subset, double tol) {
  if (subset.size() <= 1) return 0;
  const auto n = points[subset[0]].size();
  Eigen::MatrixXd diffs(static_cast<Eigen::Index>(subset.size() - 1), n);
  for (std::size_t i = 1; i < subset.size(); ++i) {
    diffs.row(static_cast<Eigen::Index>(i - 1)) = (points[subset[i]] - points[subset[0]]).transpose();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

int affine_rank(const PointSeq& points, double tol) {
  std::vector<std::size_t> all(points.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return affine_rank(points, all, tol);
}

bool same_point(const Vec& a, const Vec& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

PointSeq dedupe(const PointSeq& points, double tol) {
  PointSeq out;
  for (const auto& p : points) {
    if (std::none_of(out.begin(), out.end(), [&](const Vec& q) { return same_point(p, q, tol); })) {
      out.push_back(p);
    }
  }
  return out;
}

void check_dims(const PointSeq& points, int dim) {
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "points have inconsistent dimensions");
    if (!p.allFinite()) throw Error(ErrorCode::kInvalidBody, "non-finite coordinate");
  }
}

// Vertices of {x : A x <= b} by enumerating n-subsets of tight facets.
PointSeq enumerate_vertices(const std::vector<Facet>& facets, int dim, double tol) {
  PointSeq found;
  const auto nd = static_cast<std::size_t>(dim);
  detail::for_each_subset(facets.size(), nd, [&](const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd a(dim, dim);
    Eigen::VectorXd b(dim);
    for (std::size_t r = 0; r < nd; ++r) {
      a.row(static_cast<Eigen::Index>(r)) = facets[idx[r]].normal.transpose();
      b[static_cast<Eigen::Index>(r)] = facets[idx[r]].offset;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-10);
    if (lu.rank() < dim) return true;
    Vec x = lu.solve(b);
    for (const auto& f : facets) {
      if (f.normal.dot(x) > f.offset + tol) return true;
    }
    if (std::none_of(found.begin(), found.end(), [&](const Vec& q) { return same_point(x, q, tol); })) {
      found.push_back(std::move(x));
    }
    return true;
  });
  return found;
}

bool facets_bounded(const std::vector<Facet>& facets, int dim) {
  for (int k = 0; k < dim; ++k) {
    for (double sign : {1.0, -1.0}) {
      lp::LinearProgram prog(dim);
      prog.objective[k] = -sign;
      for (const auto& f : facets) prog.add_inequality(f.normal.transpose(), f.offset);
      if (lp::solve(prog).status != lp::Status::kOptimal) return false;
    }
  }
  return true;
}

}  // namespace

ConvexPolytope::ConvexPolytope(int dim, std::vector<Facet> facets, PointSeq vertices)
    : dim_(dim), facets_(std::move(facets)), vertices_(std::move(vertices)) {}

ConvexPolytope ConvexPolytope::from_vertices(const PointSeq& input) {
  if (input.empty()) throw Error(ErrorCode::kInvalidBody, "empty vertex list");
  const int dim = static_cast<int>(input.front().size());
  if (dim < 1) throw Error(ErrorCode::kInvalidBody, "dimension must be at least 1");
  check_dims(input, dim);
  const double scale = coordinate_scale(input);
  const double tol = kGeomTol * scale;

  PointSeq points = dedupe(input, 1e-12 * scale);
  if (affine_rank(points, tol) < dim) {
    throw Error(ErrorCode::kInvalidBody, "points do not span a full-dimensional body");
  }

  std::vector<Facet> facets;
  const auto nd = static_cast<std::size_t>(dim);
  detail::for_each_subset(points.size(), nd, [&](const std::vector<std::size_t>& idx) {
    Vec normal;
    if (dim == 1) {
      normal = Vec::Ones(1);
    } else {
      Eigen::MatrixXd diffs(dim - 1, dim);
      for (std::size_t i = 1; i < nd; ++i) {
        diffs.row(static_cast<Eigen::Index>(i - 1)) = (points[idx[i]] - points[idx[0]]).transpose();
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
      lu.setThreshold(1e-10);
      if (lu.rank() != dim - 1) return true;
      normal = lu.kernel().col(0);
      normal.normalize();
    }
    for (double sign : {1.0, -1.0}) {
      const Vec a = sign * normal;
      const double b = a.dot(points[idx[0]]);
      bool ok = true;
      for (const auto& p : points) {
        if (a.dot(p) > b + tol) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const bool dup = std::any_of(facets.begin(), facets.end(), [&](const Facet& f) {
        return (f.normal - a).cwiseAbs().maxCoeff() <= 1e-9 && std::abs(f.offset - b) <= tol;
      });
      if (!dup) facets.push_back({a, b});
    }
    return true;
  });

  // Keep exactly the points that are extreme: their active normals span R^n.
  PointSeq vertices;
  for (const auto& p : points) {
    std::vector<Vec> active;
    for (const auto& f : facets) {
      if (std::abs(f.normal.dot(p) - f.offset) <= tol) active.push_back(f.normal);
    }
    if (static_cast<int>(active.size()) < dim) continue;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(active.size()), dim);
    for (std::size_t i = 0; i < active.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = active[i].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-10);
    if (lu.rank() == dim) vertices.push_back(p);
  }

  ConvexPolytope body(dim, std::move(facets), std::move(vertices));
  body.check_invariants();
  return body;
}

ConvexPolytope ConvexPolytope::from_halfspaces(const std::vector<Vec>& normals, const std::vector<double>& offsets) {
  if (normals.empty() || normals.size() != offsets.size()) {
    throw Error(ErrorCode::kInvalidBody, "half-space normals and offsets must be non-empty and equally long");
  }
  const int dim = static_cast<int>(normals.front().size());
  if (dim < 1) throw Error(ErrorCode::kInvalidBody, "dimension must be at least 1");
  check_dims(normals, dim);

  std::vector<Facet> facets;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const double norm = normals[i].norm();
    if (norm <= 1e-12 || !std::isfinite(offsets[i])) {
      throw Error(ErrorCode::kInvalidBody, "half-space " + std::to_string(i) + " is degenerate");
    }
    Facet f{normals[i] / norm, offsets[i] / norm};
    const bool dup = std::any_of(facets.begin(), facets.end(), [&](const Facet& g) {
      return (g.normal - f.normal).cwiseAbs().maxCoeff() <= 1e-12 && std::abs(g.offset - f.offset) <= 1e-12;
    });
    if (!dup) facets.push_back(std::move(f));
  }
  if (!facets_bounded(facets, dim)) {
    throw Error(ErrorCode::kInvalidBody, "half-spaces describe an empty or unbounded set");
  }

  double scale = 1.0;
  for (const auto& f : facets) scale = std::max(scale, std::abs(f.offset));
  const double tol = kGeomTol * scale;
  PointSeq vertices = enumerate_vertices(facets, dim, tol);
  if (vertices.empty() || affine_rank(vertices, tol) < dim) {
    throw Error(ErrorCode::kInvalidBody, "half-spaces describe a lower-dimensional set");
  }

  // Drop inequalities whose face is not (n-1)-dimensional, and duplicates of
  // the same supporting hyperplane.
  std::vector<Facet> kept;
  for (const auto& f : facets) {
    std::vector<std::size_t> on;
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      if (std::abs(f.normal.dot(vertices[v]) - f.offset) <= tol) on.push_back(v);
    }
    if (affine_rank(vertices, on, tol) != dim - 1 || (dim == 1 && on.empty())) continue;
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Facet& g) {
      return (g.normal - f.normal).cwiseAbs().maxCoeff() <= 1e-9 && std::abs(g.offset - f.offset) <= tol;
    });
    if (!dup) kept.push_back(f);
  }

  ConvexPolytope body(dim, std::move(kept), std::move(vertices));
  body.check_invariants();
  return body;
}

ConvexPolytope ConvexPolytope::from_representations(std::vector<Facet> facets, PointSeq vertices) {
  if (facets.empty() || vertices.empty()) {
    throw Error(ErrorCode::kInvalidBody, "both representations must be non-empty");
  }
  const int dim = static_cast<int>(vertices.front().size());
  check_dims(vertices, dim);
  for (auto& f : facets) {
    if (f.normal.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "facet normal has the wrong dimension");
    const double norm = f.normal.norm();
    if (norm <= 1e-12) throw Error(ErrorCode::kInvalidBody, "zero facet normal");
    if (std::abs(norm - 1.0) > 1e-12) {
      f.normal /= norm;
      f.offset /= norm;
    }
  }
  ConvexPolytope body(dim, std::move(facets), std::move(vertices));
  body.check_invariants();

  // The H-description must not admit vertices beyond the V-description.
  double scale = coordinate_scale(body.vertices_);
  if (!facets_bounded(body.facets_, dim)) {
    throw Error(ErrorCode::kInvalidBody, "H-representation is unbounded");
  }
  const PointSeq h_vertices = enumerate_vertices(body.facets_, dim, kGeomTol * scale);
  if (h_vertices.size() != body.vertices_.size()) {
    throw Error(ErrorCode::kInvalidBody, "H- and V-representation describe different sets");
  }
  for (const auto& hv : h_vertices) {
    if (std::none_of(body.vertices_.begin(), body.vertices_.end(),
                     [&](const Vec& v) { return same_point(hv, v, 1e-8 * scale); })) {
      throw Error(ErrorCode::kInvalidBody, "H- and V-representation describe different sets");
    }
  }
  return body;
}

void ConvexPolytope::check_invariants() const {
  const double scale = coordinate_scale(vertices_);
  const double tol = kGeomTol * scale;
  if (static_cast<int>(vertices_.size()) < dim_ + 1 || affine_rank(vertices_, tol) < dim_) {
    throw Error(ErrorCode::kInvalidBody, "vertices do not span a full-dimensional body");
  }
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    const auto& f = facets_[i];
    double best = -lp::kInf;
    std::vector<std::size_t> on;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      const double val = f.normal.dot(vertices_[v]);
      if (val > f.offset + tol) {
        throw Error(ErrorCode::kInvalidBody, "vertex " + std::to_string(v) + " violates facet " + std::to_string(i));
      }
      best = std::max(best, val);
      if (std::abs(val - f.offset) <= tol) on.push_back(v);
    }
    if (std::abs(best - f.offset) > tol) {
      throw Error(ErrorCode::kInvalidBody, "facet " + std::to_string(i) + " does not touch the vertex set");
    }
    if (static_cast<int>(on.size()) < dim_ || affine_rank(vertices_, on, tol) != dim_ - 1) {
      throw Error(ErrorCode::kInvalidBody, "facet " + std::to_string(i) + " is not supported by n vertices");
    }
  }
}

double ConvexPolytope::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) d = std::max(d, (vertices_[i] - vertices_[j]).norm());
  }
  return d;
}

std::vector<std::size_t> ConvexPolytope::facet_vertices(std::size_t i) const {
  const double tol = kGeomTol * coordinate_scale(vertices_);
  std::vector<std::size_t> on;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (std::abs(facets_.at(i).normal.dot(vertices_[v]) - facets_[i].offset) <= tol) on.push_back(v);
  }
  return on;
}

ConvexPolytope affine_image(const ConvexPolytope& body, double scale, const Vec& offset) {
  if (scale == 0.0 || !std::isfinite(scale)) throw Error(ErrorCode::kInvalidArgument, "scale must be finite and non-zero");
  if (offset.size() != body.dim()) throw Error(ErrorCode::kDimensionMismatch, "translation has the wrong dimension");
  const double sign = scale > 0.0 ? 1.0 : -1.0;
  std::vector<Facet> facets;
  facets.reserve(body.num_facets());
  for (const auto& f : body.facets()) {
    Vec a = sign * f.normal;
    const double b = std::abs(scale) * f.offset + a.dot(offset);
    facets.push_back({std::move(a), b});
  }
  PointSeq vertices;
  vertices.reserve(body.num_vertices());
  for (const auto& v : body.vertices()) vertices.push_back(scale * v + offset);
  return ConvexPolytope::from_representations(std::move(facets), std::move(vertices));
}

ConvexPolytope negate(const ConvexPolytope& body) { return affine_image(body, -1.0, Vec::Zero(body.dim())); }

ConvexPolytope translate(const ConvexPolytope& body, const Vec& offset) { return affine_image(body, 1.0, offset); }

}  // namespace ehz
