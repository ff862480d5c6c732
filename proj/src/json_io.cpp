#include "ehz/json_io.hpp"

#include <cmath>

#include <json.hpp>

#include "ehz/errors.hpp"

namespace ehz::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kParse, "field '" + path + "': " + what);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string text_of(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

Vec vector_of(const json& j, const std::string& path, int dim = -1) {
  array(j, path);
  if (dim >= 0 && static_cast<int>(j.size()) != dim) {
    fail(path, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(j.size()));
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], index(path, i));
  return v;
}

PointSeq points_of(const json& j, const std::string& path, int dim = -1) {
  array(j, path);
  PointSeq out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(vector_of(j[i], index(path, i), dim));
    if (dim < 0) dim = static_cast<int>(out.back().size());
  }
  return out;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json points_json(const PointSeq& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(vec_json(p));
  return a;
}

json curve_obj(const PointSeq& pts) { return json{{"points", points_json(pts)}}; }

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_number(const json& obj, const std::string& key, const std::string& path) {
  const json& j = member(obj, key, path);
  if (j.is_null()) return std::nullopt;
  return number(j, join(path, key));
}

const char* location_name(Location loc) { return to_string(loc); }

Location location_from(const std::string& s, const std::string& path) {
  for (auto loc : {Location::kInterior, Location::kBoundary, Location::kOutside}) {
    if (s == to_string(loc)) return loc;
  }
  fail(path, "unknown location '" + s + "'");
}

VerifyFailure failure_from(const std::string& s, const std::string& path) {
  for (auto f : {VerifyFailure::kNone, VerifyFailure::kPointOffBoundary, VerifyFailure::kConeViolation,
                 VerifyFailure::kCrossCheck}) {
    if (s == to_string(f)) return f;
  }
  fail(path, "unknown failure kind '" + s + "'");
}

json certificate_obj(const FcpCertificate& cert) {
  return json{{"margin", cert.margin},
              {"translation", vec_json(cert.translation)},
              {"active_facets", cert.active_facets},
              {"in_F", cert.in_F}};
}

FcpCertificate certificate_from(const json& j, const std::string& path) {
  FcpCertificate c;
  c.margin = number(member(j, "margin", path), join(path, "margin"));
  c.translation = vector_of(member(j, "translation", path), join(path, "translation"));
  const json& act = array(member(j, "active_facets", path), join(path, "active_facets"));
  for (std::size_t i = 0; i < act.size(); ++i) {
    if (!act[i].is_number_unsigned()) fail(index(join(path, "active_facets"), i), "expected a facet index");
    c.active_facets.push_back(act[i].get<std::size_t>());
  }
  c.in_F = boolean(member(j, "in_F", path), join(path, "in_F"));
  return c;
}

json strong_obj(const StrongReport& r) {
  json bounces = json::array();
  for (const auto& b : r.bounces) {
    bounces.push_back({{"index", b.index},
                       {"q_location", location_name(b.q_location)},
                       {"p_location", location_name(b.p_location)},
                       {"travel_residual", b.travel_residual},
                       {"reflect_residual", b.reflect_residual},
                       {"travel_ok", b.travel_ok},
                       {"reflect_ok", b.reflect_ok}});
  }
  return json{{"passed", r.passed}, {"failure", to_string(r.failure)}, {"message", r.message}, {"bounces", bounces}};
}

StrongReport strong_from(const json& j, const std::string& path) {
  StrongReport r;
  r.passed = boolean(member(j, "passed", path), join(path, "passed"));
  r.failure = failure_from(text_of(member(j, "failure", path), join(path, "failure")), join(path, "failure"));
  r.message = text_of(member(j, "message", path), join(path, "message"));
  const std::string bp = join(path, "bounces");
  const json& bs = array(member(j, "bounces", path), bp);
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const std::string p = index(bp, i);
    StrongBounce b;
    b.index = static_cast<std::size_t>(number(member(bs[i], "index", p), join(p, "index")));
    b.q_location = location_from(text_of(member(bs[i], "q_location", p), join(p, "q_location")), join(p, "q_location"));
    b.p_location = location_from(text_of(member(bs[i], "p_location", p), join(p, "p_location")), join(p, "p_location"));
    b.travel_residual = number(member(bs[i], "travel_residual", p), join(p, "travel_residual"));
    b.reflect_residual = number(member(bs[i], "reflect_residual", p), join(p, "reflect_residual"));
    b.travel_ok = boolean(member(bs[i], "travel_ok", p), join(p, "travel_ok"));
    b.reflect_ok = boolean(member(bs[i], "reflect_ok", p), join(p, "reflect_ok"));
    r.bounces.push_back(b);
  }
  return r;
}

json weak_obj(const WeakReport& r) {
  json bounces = json::array();
  for (const auto& b : r.bounces) {
    bounces.push_back({{"index", b.index},
                       {"first_order_ok", b.first_order_ok},
                       {"orientation", b.orientation},
                       {"hyperplane_normal", vec_json(b.hyperplane_normal)},
                       {"value_at_bounce", b.value_at_bounce},
                       {"direct_minimum", b.direct_minimum},
                       {"cross_check_ok", b.cross_check_ok},
                       {"ok", b.ok}});
  }
  return json{{"passed", r.passed}, {"failure", to_string(r.failure)}, {"message", r.message}, {"bounces", bounces}};
}

WeakReport weak_from(const json& j, const std::string& path) {
  WeakReport r;
  r.passed = boolean(member(j, "passed", path), join(path, "passed"));
  r.failure = failure_from(text_of(member(j, "failure", path), join(path, "failure")), join(path, "failure"));
  r.message = text_of(member(j, "message", path), join(path, "message"));
  const std::string bp = join(path, "bounces");
  const json& bs = array(member(j, "bounces", path), bp);
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const std::string p = index(bp, i);
    WeakBounce b;
    b.index = static_cast<std::size_t>(number(member(bs[i], "index", p), join(p, "index")));
    b.first_order_ok = boolean(member(bs[i], "first_order_ok", p), join(p, "first_order_ok"));
    b.orientation = static_cast<int>(number(member(bs[i], "orientation", p), join(p, "orientation")));
    b.hyperplane_normal = vector_of(member(bs[i], "hyperplane_normal", p), join(p, "hyperplane_normal"));
    b.value_at_bounce = number(member(bs[i], "value_at_bounce", p), join(p, "value_at_bounce"));
    b.direct_minimum = number(member(bs[i], "direct_minimum", p), join(p, "direct_minimum"));
    b.cross_check_ok = boolean(member(bs[i], "cross_check_ok", p), join(p, "cross_check_ok"));
    b.ok = boolean(member(bs[i], "ok", p), join(p, "ok"));
    r.bounces.push_back(std::move(b));
  }
  return r;
}

}  // namespace

std::string body_to_json(const BodySpec& body) {
  const auto& p = body.polytope;
  json normals = json::array();
  json offsets = json::array();
  for (const auto& f : p.facets()) {
    normals.push_back(vec_json(f.normal));
    offsets.push_back(f.offset);
  }
  json prov = {{"kind", body.provenance.kind}};
  if (body.provenance.kind == "generated") {
    prov["family"] = body.provenance.family;
    prov["seed"] = body.provenance.seed;
    prov["params"] = body.provenance.params;
  }
  json j = {{"name", body.name},
            {"provenance", prov},
            {"dim", p.dim()},
            {"hrep", {{"normals", normals}, {"offsets", offsets}}},
            {"vrep", {{"vertices", points_json(p.vertices())}}}};
  return j.dump(2);
}

BodySpec body_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail("", "a body must be a JSON object");
  const json& dim_j = member(j, "dim", "");
  if (!dim_j.is_number_integer() || dim_j.get<int>() < 1) fail("dim", "expected a positive integer");
  const int dim = dim_j.get<int>();

  std::string name;
  Provenance provenance;
  if (auto it = j.find("name"); it != j.end()) name = text_of(*it, "name");
  if (auto it = j.find("provenance"); it != j.end()) {
    const json& pj = *it;
    provenance.kind = text_of(member(pj, "kind", "provenance"), "provenance.kind");
    if (provenance.kind != "literal" && provenance.kind != "generated") {
      fail("provenance.kind", "expected 'literal' or 'generated'");
    }
    if (provenance.kind == "generated") {
      provenance.family = text_of(member(pj, "family", "provenance"), "provenance.family");
      const json& seed = member(pj, "seed", "provenance");
      if (!seed.is_number_unsigned()) fail("provenance.seed", "expected a non-negative integer");
      provenance.seed = seed.get<std::uint64_t>();
      provenance.params = [&] {
        std::vector<double> out;
        const Vec v = vector_of(member(pj, "params", "provenance"), "provenance.params");
        for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
        return out;
      }();
    }
  }

  const auto hit = j.find("hrep");
  const auto vit = j.find("vrep");
  const bool has_h = hit != j.end() && !hit->is_null();
  const bool has_v = vit != j.end() && !vit->is_null();
  if (!has_h && !has_v) fail("hrep", "a body needs hrep, vrep, or both");

  std::vector<Vec> normals;
  std::vector<double> offsets;
  if (has_h) {
    normals = points_of(member(*hit, "normals", "hrep"), "hrep.normals", dim);
    const Vec off = vector_of(member(*hit, "offsets", "hrep"), "hrep.offsets", static_cast<int>(normals.size()));
    offsets.assign(off.data(), off.data() + off.size());
  }
  PointSeq vertices;
  if (has_v) vertices = points_of(member(*vit, "vertices", "vrep"), "vrep.vertices", dim);

  auto build = [&] {
    if (has_h && has_v) {
      std::vector<Facet> facets;
      for (std::size_t i = 0; i < normals.size(); ++i) facets.push_back({normals[i], offsets[i]});
      return ConvexPolytope::from_representations(std::move(facets), std::move(vertices));
    }
    return has_h ? ConvexPolytope::from_halfspaces(normals, offsets) : ConvexPolytope::from_vertices(vertices);
  };
  return BodySpec{std::move(name), build(), std::move(provenance)};
}

std::string curve_to_json(const PointSeq& points) { return curve_obj(points).dump(2); }

PointSeq curve_from_json(const std::string& text) {
  const json j = parse_text(text);
  PointSeq pts = points_of(member(j, "points", ""), "points");
  if (pts.empty()) fail("points", "a curve needs at least one point");
  return pts;
}

std::string certificate_to_json(const FcpCertificate& cert) { return certificate_obj(cert).dump(2); }
std::string strong_report_to_json(const StrongReport& report) { return strong_obj(report).dump(2); }
std::string weak_report_to_json(const WeakReport& report) { return weak_obj(report).dump(2); }

std::string identities_to_json(const IdentityReport& report) {
  json values = json::object();
  for (std::size_t i = 0; i < report.labels.size(); ++i) values[report.labels[i]] = report.values[i];
  return json{{"values", values}, {"max_relative_deviation", report.max_relative_deviation}}.dump(2);
}

std::string result_to_json(const CapacityResult& r) {
  const auto& q = r.quantities;
  json billiard = {{"source", r.billiard_source}};
  billiard["curve"] = r.billiard_curve ? curve_obj(r.billiard_curve->points()) : json(nullptr);
  billiard["dual"] = r.billiard_dual ? curve_obj(*r.billiard_dual) : json(nullptr);
  billiard["strong"] = r.billiard_report ? strong_obj(*r.billiard_report) : json(nullptr);
  billiard["weak"] = r.billiard_weak_report ? weak_obj(*r.billiard_weak_report) : json(nullptr);
  json j = {
      {"value", r.value},
      {"assignment", r.assignment.facets},
      {"curve", curve_obj(r.curve.points())},
      {"certificate", certificate_obj(r.certificate)},
      {"dual", r.dual ? curve_obj(*r.dual) : json(nullptr)},
      {"dual_diagnostic", r.dual_diagnostic},
      {"billiard", billiard},
      {"quantities",
       {{"min_fcp_K_lengthT", q.min_fcp_K_lengthT},
        {"min_fcp_T_lengthK", optional_json(q.min_fcp_T_lengthK)},
        {"billiard_lengthT", optional_json(q.billiard_lengthT)},
        {"billiard_dual_lengthMinusK", optional_json(q.billiard_dual_lengthMinusK)},
        {"oracle", optional_json(q.oracle)}}},
      {"max_relative_deviation", r.max_relative_deviation},
      {"identities_ok", r.identities_ok},
      {"assignments_solved", r.assignments_solved},
      {"timings_ms",
       {{"primal", r.timings.primal_ms},
        {"symmetric", r.timings.symmetric_ms},
        {"billiard", r.timings.billiard_ms},
        {"oracle", r.timings.oracle_ms}}},
  };
  return j.dump(2);
}

CapacityResult result_from_json(const std::string& text) {
  const json j = parse_text(text);
  auto pts = [&](const json& obj, const std::string& path) {
    return points_of(member(obj, "points", path), join(path, "points"));
  };
  CapacityResult r(number(member(j, "value", ""), "value"), ClosedPolygonalCurve(pts(member(j, "curve", ""), "curve")));
  const json& asg = array(member(j, "assignment", ""), "assignment");
  for (std::size_t i = 0; i < asg.size(); ++i) {
    if (!asg[i].is_number_unsigned()) fail(index("assignment", i), "expected a facet index");
    r.assignment.facets.push_back(asg[i].get<std::size_t>());
  }
  r.certificate = certificate_from(member(j, "certificate", ""), "certificate");
  if (const json& d = member(j, "dual", ""); !d.is_null()) r.dual = pts(d, "dual");
  r.dual_diagnostic = text_of(member(j, "dual_diagnostic", ""), "dual_diagnostic");

  const json& b = member(j, "billiard", "");
  r.billiard_source = text_of(member(b, "source", "billiard"), "billiard.source");
  if (const json& c = member(b, "curve", "billiard"); !c.is_null()) {
    r.billiard_curve = ClosedPolygonalCurve(pts(c, "billiard.curve"));
  }
  if (const json& d = member(b, "dual", "billiard"); !d.is_null()) r.billiard_dual = pts(d, "billiard.dual");
  if (const json& s = member(b, "strong", "billiard"); !s.is_null()) r.billiard_report = strong_from(s, "billiard.strong");
  if (const json& w = member(b, "weak", "billiard"); !w.is_null()) r.billiard_weak_report = weak_from(w, "billiard.weak");

  const json& qj = member(j, "quantities", "");
  r.quantities.min_fcp_K_lengthT = number(member(qj, "min_fcp_K_lengthT", "quantities"), "quantities.min_fcp_K_lengthT");
  r.quantities.min_fcp_T_lengthK = optional_number(qj, "min_fcp_T_lengthK", "quantities");
  r.quantities.billiard_lengthT = optional_number(qj, "billiard_lengthT", "quantities");
  r.quantities.billiard_dual_lengthMinusK = optional_number(qj, "billiard_dual_lengthMinusK", "quantities");
  r.quantities.oracle = optional_number(qj, "oracle", "quantities");

  r.max_relative_deviation = number(member(j, "max_relative_deviation", ""), "max_relative_deviation");
  r.identities_ok = boolean(member(j, "identities_ok", ""), "identities_ok");
  const json& solved = member(j, "assignments_solved", "");
  if (!solved.is_number_unsigned()) fail("assignments_solved", "expected a non-negative integer");
  r.assignments_solved = solved.get<std::size_t>();
  const json& t = member(j, "timings_ms", "");
  r.timings.primal_ms = number(member(t, "primal", "timings_ms"), "timings_ms.primal");
  r.timings.symmetric_ms = number(member(t, "symmetric", "timings_ms"), "timings_ms.symmetric");
  r.timings.billiard_ms = number(member(t, "billiard", "timings_ms"), "timings_ms.billiard");
  r.timings.oracle_ms = number(member(t, "oracle", "timings_ms"), "timings_ms.oracle");
  return r;
}

}  // namespace ehz::io
