#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ehz/billiards.hpp"
#include "ehz/curves.hpp"
#include "ehz/geometry.hpp"

namespace ehz {

/// Agreement required between independently computed capacity quantities.
inline constexpr double kIdentityTol = 1e-6;

/// Cyclic sequence of distinct facet indices of K whose normals contain the
/// origin in their convex hull. The first index is the smallest one; the
/// remaining order fixes the traversal orientation.
struct FacetAssignment {
  std::vector<std::size_t> facets;

  std::size_t size() const { return facets.size(); }
  friend bool operator==(const FacetAssignment&, const FacetAssignment&) = default;
  friend auto operator<=>(const FacetAssignment& a, const FacetAssignment& b) { return a.facets <=> b.facets; }
};

/// True when 0 is a convex combination of the given unit normals (LP check).
bool origin_in_normal_hull(const ConvexPolytope& body, const std::vector<std::size_t>& facets);

/// All assignments of length 2..m_max, one per rotation class, both
/// orientations kept, in (length, lexicographic) order.
std::vector<FacetAssignment> enumerate_assignments(const ConvexPolytope& table, std::size_t m_max);

struct AssignmentSolution {
  double value = 0.0;
  PointSeq points;   ///< raw optimal points, q_j on facet i_j (may coincide)
  PointSeq momenta;  ///< p_j recovered from the epigraph multipliers
};

/// min sum_j h_T(q_{j+1} - q_j) s.t. q_j in K and <a_{i_j}, q_j> = b_{i_j}.
/// The length body must contain the origin in its interior.
AssignmentSolution solve_assignment(const ConvexPolytope& table, const ConvexPolytope& length_body,
                                    const FacetAssignment& assignment);

struct CapacityOptions {
  std::size_t m_max = 0;       ///< 0 means n + 1
  double tol = kFcpTol;        ///< membership / cone tolerance
  double oracle_step = 0.0;    ///< > 0 runs the grid oracle with this step
  bool symmetric = true;       ///< also minimise l_K over F(T)
  bool billiard = true;        ///< search for a certified billiard of optimal length
  unsigned threads = 0;        ///< 0 means hardware concurrency
};

/// Quantities that must coincide at the capacity, each from its own computation.
struct CapacityQuantities {
  double min_fcp_K_lengthT = 0.0;               ///< min over F_{n+1}(K) of l_T
  std::optional<double> min_fcp_T_lengthK;     ///< min over F_{n+1}(T) of l_K
  std::optional<double> billiard_lengthT;      ///< l_T of a verified strong billiard
  std::optional<double> billiard_dual_lengthMinusK;  ///< l_{-K} of its dual trajectory
  std::optional<double> oracle;                ///< grid oracle, when requested
};

struct CapacityTimings {
  double primal_ms = 0.0;
  double symmetric_ms = 0.0;
  double billiard_ms = 0.0;
  double oracle_ms = 0.0;
};

struct CapacityResult {
  CapacityResult(double v, ClosedPolygonalCurve q) : value(v), curve(std::move(q)) {}

  double value = 0.0;
  ClosedPolygonalCurve curve;             ///< minimiser in F_{n+1}(K), canonical
  FacetAssignment assignment;
  FcpCertificate certificate;
  std::optional<PointSeq> dual;           ///< dual trajectory of `curve`, if it is a billiard
  std::string dual_diagnostic;

  std::optional<ClosedPolygonalCurve> billiard_curve;  ///< verified billiard of optimal length
  std::optional<PointSeq> billiard_dual;
  std::string billiard_source;
  std::optional<StrongReport> billiard_report;
  std::optional<WeakReport> billiard_weak_report;

  CapacityQuantities quantities;
  double max_relative_deviation = 0.0;    ///< among the quantities above (oracle excluded)
  bool identities_ok = true;
  std::size_t assignments_solved = 0;
  CapacityTimings timings;
};

/// Minimum of l_T over F_{n+1}(K): the capacity of K x T, without the
/// cross-checks.
double capacity_value(const ConvexPolytope& table, const ConvexPolytope& length_body, std::size_t m_max = 0);

CapacityResult capacity(const ConvexPolytope& table, const ConvexPolytope& length_body,
                        const CapacityOptions& options = {});

/// Grid search over tuples of boundary points of K; always an upper bound on
/// the capacity. Throws kGridTooCoarse when no tuple qualifies.
double brute_force_oracle(const ConvexPolytope& table, const ConvexPolytope& length_body, double grid_step,
                          std::size_t m_max = 0);

/// Boundary grid used by the oracle: per facet, in facet-intrinsic
/// coordinates, including the facet's vertices; duplicates removed.
PointSeq boundary_grid(const ConvexPolytope& body, double grid_step);

struct IdentityReport {
  std::vector<std::string> labels;  ///< K x T, T x K, -K x T, K x -T, -K x -T
  std::vector<double> values;
  double max_relative_deviation = 0.0;
};

IdentityReport theorem_identities(const ConvexPolytope& table, const ConvexPolytope& length_body,
                                  std::size_t m_max = 0);

/// Translate the body so that the Chebyshev centre sits at the origin when the
/// origin is not already interior. Closed-curve lengths do not change.
ConvexPolytope centered_for_length(const ConvexPolytope& body);
/// The translation applied by centered_for_length (zero when none).
Vec length_shift(const ConvexPolytope& body);

double relative_deviation(double a, double b);

}  // namespace ehz
