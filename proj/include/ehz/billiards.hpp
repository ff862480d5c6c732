#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ehz/curves.hpp"
#include "ehz/geometry.hpp"

namespace ehz {

/// Default tolerance for cone membership and boundary tests in verification.
inline constexpr double kConeTol = 1e-8;

enum class VerifyFailure { kNone, kPointOffBoundary, kConeViolation, kCrossCheck };

const char* to_string(VerifyFailure f) noexcept;

/// Per-bounce record for the pair system
///   q_{j+1} - q_j in N_T(p_j),   p_{j+1} - p_j in -N_K(q_{j+1}).
struct StrongBounce {
  std::size_t index = 0;
  Location q_location = Location::kBoundary;
  Location p_location = Location::kBoundary;
  double travel_residual = 0.0;   ///< relative residual of q_{j+1}-q_j in N_T(p_j)
  double reflect_residual = 0.0;  ///< relative residual of p_j-p_{j+1} in N_K(q_{j+1})
  bool travel_ok = false;
  bool reflect_ok = false;
};

struct StrongReport {
  bool passed = false;
  VerifyFailure failure = VerifyFailure::kNone;
  std::string message;
  std::vector<StrongBounce> bounces;
};

/// Checks that (q, p) is a closed strong billiard pair for table K and
/// length body T. Never throws on geometric failure; the report says why.
StrongReport verify_strong(const ConvexPolytope& table, const ConvexPolytope& length_body, std::span<const Vec> q,
                           std::span<const Vec> p, double tol = kConeTol);

/// Dual trajectory p on the boundary of T for a curve q on the boundary of K,
/// obtained from one feasibility LP over all p_j jointly and made unique by
/// lexicographic minimisation of (p_1, ..., p_m). Throws kNotABilliard if no
/// dual exists and kPointOffBoundary if some q_j is not on the boundary of K.
PointSeq extract_dual(const ConvexPolytope& table, const ConvexPolytope& length_body, std::span<const Vec> q,
                      double tol = kConeTol);

struct WeakBounce {
  std::size_t index = 0;
  bool first_order_ok = false;
  int orientation = 0;          ///< +1 if u - v lies in N_K(q_j), -1 if in -N_K(q_j)
  Vec hyperplane_normal;        ///< unit normal of the supporting hyperplane used
  double value_at_bounce = 0.0; ///< h_T(q_j - q_{j-1}) + h_T(q_{j+1} - q_j)
  double direct_minimum = 0.0;  ///< minimum of the same sum over the hyperplane
  bool cross_check_ok = false;
  bool ok = false;
};

struct WeakReport {
  bool passed = false;
  VerifyFailure failure = VerifyFailure::kNone;
  std::string message;
  std::vector<WeakBounce> bounces;
};

/// Weak (least-action) reflection rule at every bounce: some K-supporting
/// hyperplane through q_j on which q_j minimises the two-segment T-length.
/// Decided by subgradient feasibility and cross-checked by a direct LP
/// minimisation over that hyperplane.
WeakReport verify_weak(const ConvexPolytope& table, const ConvexPolytope& length_body, std::span<const Vec> q,
                       double tol = kConeTol);

/// Sum over j of h_{-K}(p_{j+1} - p_j): the length of the dual trajectory.
double dual_length(const ConvexPolytope& table, std::span<const Vec> p);

}  // namespace ehz
