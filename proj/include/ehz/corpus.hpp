#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ehz/geometry.hpp"

namespace ehz {

struct Provenance {
  std::string kind = "literal";  ///< "literal" or "generated"
  std::string family;            ///< generator family when generated
  std::uint64_t seed = 0;
  std::vector<double> params;    ///< family parameters (k, delta, ...)
};

struct BodySpec {
  std::string name;
  ConvexPolytope polytope;
  Provenance provenance;
};

/// square, cross-polytope, triangle, cube, octahedron, simplex-3d.
const std::vector<std::string>& named_body_names();
/// Throws kInvalidArgument for unknown names.
BodySpec named_body(const std::string& name);

/// Deterministic for a fixed seed; k extreme points, origin in the interior.
BodySpec random_polygon(int k, std::uint64_t seed);
BodySpec random_polytope(int dim, int k, std::uint64_t seed);
/// Every vertex of `base` moved by at most delta, then re-hulled. delta == 0
/// returns `base` unchanged.
BodySpec perturbed(const BodySpec& base, double delta, std::uint64_t seed);

}  // namespace ehz
