#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ehz/capacity.hpp"
#include "ehz/corpus.hpp"

namespace ehz {

struct ContinuityRow {
  double delta = 0.0;
  std::uint64_t seed = 0;
  double d_hausdorff = 0.0;
  double capacity = 0.0;
  double identity_dev = 0.0;    ///< max relative deviation of the cross-computed quantities
  bool billiard_certified = false;
  bool weak_ok = false;
};

/// For each delta and each of `samples` seeds (seed, seed+1, ...), perturbs the
/// table and recomputes the full capacity against the fixed length body.
std::vector<ContinuityRow> continuity_study(const BodySpec& base, const ConvexPolytope& length_body,
                                            const std::vector<double>& deltas, std::uint64_t seed,
                                            int samples = 1);
/// Header `delta,d_hausdorff,capacity,identity_dev`.
std::string continuity_csv(const std::vector<ContinuityRow>& rows);

struct SymmetryRow {
  std::string pair;
  IdentityReport report;
};

std::vector<SymmetryRow> symmetry_study(const std::vector<BodySpec>& tables, const std::vector<BodySpec>& lengths);
/// Header `pair,value_KT,value_TK,value_negK_T,value_K_negT,value_negK_negT,max_rel_dev`.
std::string symmetry_csv(const std::vector<SymmetryRow>& rows);

}  // namespace ehz
