#include "ehz/study.hpp"

#include <charconv>
#include <sstream>

#include "ehz/errors.hpp"

namespace ehz {

namespace {

// Shortest round-trip decimal form.
std::string num(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<ContinuityRow> continuity_study(const BodySpec& base, const ConvexPolytope& length_body,
                                            const std::vector<double>& deltas, std::uint64_t seed, int samples) {
  if (samples < 1) throw Error(ErrorCode::kInvalidArgument, "samples must be at least 1");
  std::vector<ContinuityRow> rows;
  for (double delta : deltas) {
    for (int s = 0; s < samples; ++s) {
      const std::uint64_t sd = seed + static_cast<std::uint64_t>(s);
      const BodySpec body = perturbed(base, delta, sd);
      const CapacityResult r = capacity(body.polytope, length_body);
      ContinuityRow row;
      row.delta = delta;
      row.seed = sd;
      row.d_hausdorff = hausdorff_distance(body.polytope, base.polytope);
      row.capacity = r.value;
      row.identity_dev = r.max_relative_deviation;
      row.billiard_certified = r.billiard_curve.has_value();
      row.weak_ok = r.billiard_weak_report && r.billiard_weak_report->passed;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string continuity_csv(const std::vector<ContinuityRow>& rows) {
  std::ostringstream out;
  out << "delta,d_hausdorff,capacity,identity_dev\n";
  for (const auto& r : rows) {
    out << num(r.delta) << ',' << num(r.d_hausdorff) << ',' << num(r.capacity) << ',' << num(r.identity_dev) << '\n';
  }
  return out.str();
}

std::vector<SymmetryRow> symmetry_study(const std::vector<BodySpec>& tables, const std::vector<BodySpec>& lengths) {
  if (tables.size() != lengths.size()) throw Error(ErrorCode::kInvalidArgument, "need as many tables as length bodies");
  std::vector<SymmetryRow> rows;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    rows.push_back({tables[i].name + "|" + lengths[i].name, theorem_identities(tables[i].polytope, lengths[i].polytope)});
  }
  return rows;
}

std::string symmetry_csv(const std::vector<SymmetryRow>& rows) {
  std::ostringstream out;
  out << "pair,value_KT,value_TK,value_negK_T,value_K_negT,value_negK_negT,max_rel_dev\n";
  for (const auto& r : rows) {
    out << r.pair;
    for (double v : r.report.values) out << ',' << num(v);
    out << ',' << num(r.report.max_relative_deviation) << '\n';
  }
  return out.str();
}

}  // namespace ehz
