#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ehz/geometry.hpp"

namespace ehz {

/// Membership tolerance on the max-margin value for "cannot be translated into
/// the interior".
inline constexpr double kFcpTol = 1e-8;

/// Closed polygonal curve q_1..q_m (m >= 2, indices mod m) in canonical form:
/// no two consecutive points coincide and no point lies on the segment joining
/// its neighbours.
class ClosedPolygonalCurve {
 public:
  /// Validates canonical form; throws kInvalidArgument otherwise.
  explicit ClosedPolygonalCurve(PointSeq points);

  std::size_t size() const { return points_.size(); }
  int dim() const { return static_cast<int>(points_.front().size()); }
  const Vec& operator[](std::size_t j) const { return points_[j % points_.size()]; }
  const PointSeq& points() const { return points_; }

  /// True when `other` is a cyclic rotation of this curve (same orientation).
  bool same_cycle(const ClosedPolygonalCurve& other, double tol = kGeomTol) const;

 private:
  PointSeq points_;
};

/// Removes consecutive duplicates and points on the segment between their
/// neighbours until nothing changes. Throws kCurveCollapses when fewer than two
/// distinct points remain.
ClosedPolygonalCurve canonicalize(const PointSeq& raw);

/// Sum of h_T(q_{j+1} - q_j) over the closed sequence. Works for raw point
/// sequences; requires the origin in the interior of T.
double length_ellT(const ConvexPolytope& length_body, std::span<const Vec> points);
inline double length_ellT(const ConvexPolytope& length_body, const ClosedPolygonalCurve& q) {
  return length_ellT(length_body, std::span<const Vec>(q.points()));
}

/// Same sum without the origin check; h_{T+t} differs from h_T by a linear
/// term that telescopes to zero on closed curves.
double closed_support_length(const ConvexPolytope& length_body, std::span<const Vec> points);

struct FcpCertificate {
  double margin = 0.0;   ///< optimal epsilon of the max-margin LP
  Vec translation;       ///< optimal t
  std::vector<std::size_t> active_facets;
  bool in_F = false;     ///< margin <= tol: not translatable into the interior
};

/// maximize eps over (t, eps) s.t. <a_i, q_j + t> <= b_i - eps for all i, j.
FcpCertificate fcp_certificate(const ConvexPolytope& body, std::span<const Vec> points, double tol = kFcpTol);
inline FcpCertificate fcp_certificate(const ConvexPolytope& body, const ClosedPolygonalCurve& q,
                                      double tol = kFcpTol) {
  return fcp_certificate(body, std::span<const Vec>(q.points()), tol);
}

/// Sum over j of <q_{j+1} - q_j, p_j>.
double discrete_action(std::span<const Vec> q, std::span<const Vec> p);

/// Shortest order-preserving sub-curve with at most n+1 points that still
/// cannot be translated into the interior of K. Requires q in F(K).
ClosedPolygonalCurve reduce_to_n_plus_1(const ConvexPolytope& body, const ConvexPolytope& length_body,
                                        const ClosedPolygonalCurve& q, double tol = kFcpTol);

/// Reversed traversal q_m..q_1.
PointSeq reversed(std::span<const Vec> points);

}  // namespace ehz
