#pragma once

// Test-side generators and reference computations. Nothing here calls the
// library's LP solver, enumeration or oracle; the references are written from
// first principles so they can disagree with the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "ehz/geometry.hpp"

namespace testing {

using ehz::ConvexPolytope;
using ehz::PointSeq;
using ehz::Vec;

inline Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

// splitmix64; small, seedable and independent of <random> distributions.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Vec vector(int dim, double lo, double hi) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::uint64_t state_;
};

// Convex k-gon: points on a random ellipse at stratified angles, so every point
// is extreme and the origin is interior (the gaps between angles stay < pi).
inline ConvexPolytope random_polygon(Gen& g, int k) {
  const double a = g.uniform(0.6, 1.6), b = g.uniform(0.6, 1.6), rot = g.uniform(0.0, std::numbers::pi);
  const Vec shift = g.vector(2, -0.05, 0.05);
  // Angular gaps stay below 0.8*pi, keeping every edge away from the centre.
  const double w = k == 3 ? 0.1 : 0.3;
  PointSeq pts;
  for (int i = 0; i < k; ++i) {
    const double t = 2.0 * std::numbers::pi * (i + g.uniform(0.5 - w, 0.5 + w)) / k;
    const double x = a * std::cos(t), y = b * std::sin(t);
    pts.push_back(v2(std::cos(rot) * x - std::sin(rot) * y, std::sin(rot) * x + std::cos(rot) * y) + shift);
  }
  return ConvexPolytope::from_vertices(pts);
}

// Random 3-polytope from points on a jittered sphere plus the six axis caps,
// which keeps the origin well inside.
inline ConvexPolytope random_polytope3(Gen& g, int extra) {
  PointSeq pts;
  for (int s : {-1, 1}) {
    for (int axis = 0; axis < 3; ++axis) {
      Vec v = Vec::Zero(3);
      v[axis] = s * g.uniform(0.7, 1.3);
      pts.push_back(v);
    }
  }
  for (int i = 0; i < extra; ++i) {
    Vec v = g.vector(3, -1.0, 1.0);
    if (v.norm() < 1e-3) continue;
    pts.push_back(v.normalized() * g.uniform(0.9, 1.4));
  }
  return ConvexPolytope::from_vertices(pts);
}

inline ConvexPolytope scaled(const ConvexPolytope& body, double s) {
  PointSeq pts;
  for (const auto& v : body.vertices()) pts.push_back(s * v);
  return ConvexPolytope::from_vertices(pts);
}

// h_T(v) straight from the vertex list.
inline double support(const ConvexPolytope& body, const Vec& v) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& w : body.vertices()) best = std::max(best, w.dot(v));
  return best;
}

// Closed-curve length sum_j h_T(q_{j+1} - q_j); translation of T cancels.
inline double curve_length(const ConvexPolytope& body, const PointSeq& q) {
  double s = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) s += support(body, q[(j + 1) % q.size()] - q[j]);
  return s;
}

// Largest eps such that some translate q + t has every point at depth >= eps
// inside K, found by enumerating basic solutions of the (dim+1)-variable
// system <a_i, t> + eps <= b_i - <a_i, q_j>. The program is bounded because K
// is, so the optimum sits at a vertex of the feasible region.
inline double max_margin(const ConvexPolytope& K, const PointSeq& q) {
  const int n = K.dim();
  std::vector<Vec> rows;
  std::vector<double> rhs;
  for (const auto& f : K.facets()) {
    double tightest = std::numeric_limits<double>::infinity();
    for (const auto& p : q) tightest = std::min(tightest, f.offset - f.normal.dot(p));
    Vec r(n + 1);
    r << f.normal, 1.0;
    rows.push_back(r);
    rhs.push_back(tightest);
  }
  const std::size_t m = rows.size();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(n + 1);
  // Iterate over all (n+1)-subsets of the rows.
  for (int i = 0; i <= n; ++i) pick[i] = static_cast<std::size_t>(i);
  while (true) {
    Eigen::MatrixXd A(n + 1, n + 1);
    Vec b(n + 1);
    for (int r = 0; r <= n; ++r) {
      A.row(r) = rows[pick[r]].transpose();
      b[r] = rhs[pick[r]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.isInvertible()) {
      const Vec x = lu.solve(b);
      bool feasible = true;
      for (std::size_t r = 0; r < m && feasible; ++r) feasible = rows[r].dot(x) <= rhs[r] + 1e-10;
      if (feasible) best = std::max(best, x[n]);
    }
    int k = n;
    while (k >= 0 && pick[k] == m - (n + 1) + static_cast<std::size_t>(k)) --k;
    if (k < 0) break;
    ++pick[k];
    for (int r = k + 1; r <= n; ++r) pick[r] = pick[r - 1] + 1;
  }
  return best;
}

inline bool cannot_translate_inside(const ConvexPolytope& K, const PointSeq& q, double tol = 1e-8) {
  return max_margin(K, q) <= tol;
}

// Boundary samples of a polygon: walk each edge of the vertex cycle in steps
// of at most `step`. Vertices are ordered by angle around the centroid.
inline PointSeq polygon_boundary(const ConvexPolytope& K, double step) {
  PointSeq vs = K.vertices();
  Vec c = Vec::Zero(2);
  for (const auto& v : vs) c += v;
  c /= static_cast<double>(vs.size());
  std::sort(vs.begin(), vs.end(), [&](const Vec& a, const Vec& b) {
    return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
  });
  PointSeq out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Vec& a = vs[i];
    const Vec& b = vs[(i + 1) % vs.size()];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / step)));
    for (int s = 0; s < pieces; ++s) out.push_back(a + (b - a) * (static_cast<double>(s) / pieces));
  }
  return out;
}

// Shortest closed 2- or 3-gon on boundary samples of the polygon K that cannot
// be translated into its interior; an upper bound on the capacity.
inline double reference_capacity_2d(const ConvexPolytope& K, const ConvexPolytope& T, double step) {
  const PointSeq pts = polygon_boundary(K, step);
  const std::size_t N = pts.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = a + 1; b < N; ++b) {
      const PointSeq two = {pts[a], pts[b]};
      const double l2 = curve_length(T, two);
      if (l2 < best && cannot_translate_inside(K, two)) best = l2;
      for (std::size_t c = a + 1; c < N; ++c) {
        if (c == b) continue;
        const PointSeq three = {pts[a], pts[b], pts[c]};
        const double l3 = curve_length(T, three);
        if (l3 < best && cannot_translate_inside(K, three)) best = l3;
      }
    }
  }
  return best;
}

inline double rel_dev(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace testing
