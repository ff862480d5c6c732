#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ehz {

using Vec = Eigen::VectorXd;
using PointSeq = std::vector<Vec>;

/// Tolerance for H/V representation consistency and geometric predicates.
inline constexpr double kGeomTol = 1e-9;

/// Outer unit normal and offset of the half-space {x : <normal, x> <= offset}.
struct Facet {
  Vec normal;
  double offset = 0.0;
};

/// A bounded, full-dimensional convex polytope carried in both H- and
/// V-representation. Immutable after construction; every factory validates
/// that the two representations describe the same set.
class ConvexPolytope {
 public:
  /// Convex hull of `points` (duplicates and non-extreme points are dropped).
  static ConvexPolytope from_vertices(const PointSeq& points);
  /// Intersection of half-spaces; normals need not be normalized. Redundant
  /// inequalities are removed.
  static ConvexPolytope from_halfspaces(const std::vector<Vec>& normals, const std::vector<double>& offsets);
  /// Takes both representations verbatim after checking they agree. Used for
  /// bit-exact round trips of serialized bodies.
  static ConvexPolytope from_representations(std::vector<Facet> facets, PointSeq vertices);

  int dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const PointSeq& vertices() const { return vertices_; }
  std::size_t num_facets() const { return facets_.size(); }
  std::size_t num_vertices() const { return vertices_.size(); }

  /// Largest Euclidean distance between two vertices.
  double diameter() const;
  /// Indices of vertices lying on facet `i` (within kGeomTol).
  std::vector<std::size_t> facet_vertices(std::size_t i) const;

 private:
  ConvexPolytope(int dim, std::vector<Facet> facets, PointSeq vertices);
  void check_invariants() const;

  int dim_ = 0;
  std::vector<Facet> facets_;
  PointSeq vertices_;
};

/// Finitely generated convex cone; the trivial cone {0} has no generators.
struct Cone {
  std::vector<Vec> generators;
  bool trivial() const { return generators.empty(); }
};

struct SupportValue {
  double value = 0.0;
  std::vector<std::size_t> argmax_vertices;
};

enum class Location { kInterior, kBoundary, kOutside };

const char* to_string(Location loc) noexcept;

SupportValue support_function(const ConvexPolytope& body, const Vec& direction);
/// Support value only; the hot path for length computations.
double support_value(const ConvexPolytope& body, const Vec& direction);

/// Gauge min{s >= 0 : x in s·P}. Requires the origin in the interior.
double minkowski_functional(const ConvexPolytope& body, const Vec& x);

/// Polar body {y : <y, x> <= 1 for all x in P}. Requires the origin in the interior.
ConvexPolytope polar(const ConvexPolytope& body);

Location contains(const ConvexPolytope& body, const Vec& x, double tol = kGeomTol);

/// Cone spanned by the unit normals of facets active at x.
Cone normal_cone(const ConvexPolytope& body, const Vec& x, double tol = kGeomTol);
/// Facet indices active at x (|<a_i,x> - b_i| <= tol).
std::vector<std::size_t> active_facets(const ConvexPolytope& body, const Vec& x, double tol = kGeomTol);

/// Infinity-norm residual min_{lambda >= 0} ||v - G lambda||, solved as an LP.
double cone_residual(const Cone& cone, const Vec& v);
/// v lies in the cone when its residual is at most tol·(1 + ||v||).
bool cone_contains(const Cone& cone, const Vec& v, double tol = 1e-8);

/// Euclidean projection of x onto conv(points) by Wolfe's minimum-norm-point
/// iteration (a fully corrective conditional-gradient method).
Vec project_onto_hull(const PointSeq& points, const Vec& x);
double distance_to(const ConvexPolytope& body, const Vec& x);

double hausdorff_distance(const ConvexPolytope& a, const ConvexPolytope& b);

/// scale·P + translate; a negative scale reflects the body through the origin.
ConvexPolytope affine_image(const ConvexPolytope& body, double scale, const Vec& translate);
ConvexPolytope negate(const ConvexPolytope& body);
ConvexPolytope translate(const ConvexPolytope& body, const Vec& offset);

/// Center of the largest inscribed ball and its radius.
struct ChebyshevBall {
  Vec center;
  double radius = 0.0;
};
ChebyshevBall chebyshev_ball(const ConvexPolytope& body);

bool origin_interior(const ConvexPolytope& body, double tol = kGeomTol);

}  // namespace ehz
