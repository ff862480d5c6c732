#include "ehz/ehz.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "ehz/capacity.hpp"
#include "ehz/errors.hpp"
#include "ehz/json_io.hpp"
#include "ehz/study.hpp"

struct ehz_body {
  ehz::BodySpec spec;
};

struct ehz_result {
  ehz::CapacityResult result;
};

namespace {

thread_local std::string last_error;

ehz_status to_status(ehz::ErrorCode code) { return static_cast<ehz_status>(static_cast<int>(code)); }

// Runs fn, mapping every exception to a status and recording its message.
template <typename Fn>
ehz_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return EHZ_OK;
  } catch (const ehz::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return EHZ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return EHZ_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw ehz::Error(ehz::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ehz::PointSeq curve_arg(const char* json, const char* what) {
  require(json, what);
  return ehz::io::curve_from_json(json);
}

ehz::CapacityOptions convert(const ehz_options* o) {
  ehz::CapacityOptions out;
  if (o == nullptr) return out;
  out.m_max = o->m_max;
  out.tol = o->tol;
  out.oracle_step = o->oracle_step;
  out.symmetric = o->symmetric != 0;
  out.billiard = o->billiard != 0;
  out.threads = o->threads;
  return out;
}

}  // namespace

extern "C" {

const char* ehz_last_error(void) { return last_error.c_str(); }

const char* ehz_status_name(ehz_status status) {
  if (status == EHZ_OK) return "ok";
  if (status == EHZ_ERR_INTERNAL) return "internal";
  if (status >= EHZ_ERR_INVALID_ARGUMENT && status <= EHZ_ERR_IDENTITY_CHECK) {
    return ehz::to_string(static_cast<ehz::ErrorCode>(status));
  }
  return "unknown";
}

void ehz_string_free(char* s) { std::free(s); }

void ehz_options_default(ehz_options* options) {
  if (options == nullptr) return;
  const ehz::CapacityOptions d;
  options->m_max = d.m_max;
  options->tol = d.tol;
  options->oracle_step = d.oracle_step;
  options->symmetric = d.symmetric ? 1 : 0;
  options->billiard = d.billiard ? 1 : 0;
  options->threads = d.threads;
}

ehz_status ehz_body_from_json(const char* json, ehz_body** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new ehz_body{ehz::io::body_from_json(json)};
  });
}

ehz_status ehz_body_named(const char* name, ehz_body** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new ehz_body{ehz::named_body(name)};
  });
}

ehz_status ehz_body_random_polygon(int k, uint64_t seed, ehz_body** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ehz_body{ehz::random_polygon(k, seed)};
  });
}

ehz_status ehz_body_random_polytope(int dim, int k, uint64_t seed, ehz_body** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ehz_body{ehz::random_polytope(dim, k, seed)};
  });
}

ehz_status ehz_body_perturbed(const ehz_body* base, double delta, uint64_t seed, ehz_body** out) {
  return guarded([&] {
    require(base, "base");
    require(out, "out");
    *out = new ehz_body{ehz::perturbed(base->spec, delta, seed)};
  });
}

ehz_status ehz_body_to_json(const ehz_body* body, char** out) {
  return guarded([&] {
    require(body, "body");
    require(out, "out");
    *out = dup_string(ehz::io::body_to_json(body->spec));
  });
}

int ehz_body_dim(const ehz_body* body) { return body == nullptr ? 0 : body->spec.polytope.dim(); }

double ehz_hausdorff(const ehz_body* a, const ehz_body* b) {
  double d = -1.0;
  const ehz_status st = guarded([&] {
    require(a, "a");
    require(b, "b");
    d = ehz::hausdorff_distance(a->spec.polytope, b->spec.polytope);
  });
  return st == EHZ_OK ? d : -1.0;
}

void ehz_body_free(ehz_body* body) { delete body; }

ehz_status ehz_capacity(const ehz_body* K, const ehz_body* T, const ehz_options* options, ehz_result** out) {
  return guarded([&] {
    require(K, "K");
    require(T, "T");
    require(out, "out");
    *out = new ehz_result{ehz::capacity(K->spec.polytope, T->spec.polytope, convert(options))};
  });
}

double ehz_result_value(const ehz_result* result) { return result == nullptr ? 0.0 : result->result.value; }

int ehz_result_identities_ok(const ehz_result* result) {
  return result != nullptr && result->result.identities_ok ? 1 : 0;
}

int ehz_result_has_billiard(const ehz_result* result) {
  return result != nullptr && result->result.billiard_curve.has_value() ? 1 : 0;
}

ehz_status ehz_result_to_json(const ehz_result* result, char** out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    *out = dup_string(ehz::io::result_to_json(result->result));
  });
}

void ehz_result_free(ehz_result* result) { delete result; }

ehz_status ehz_oracle(const ehz_body* K, const ehz_body* T, double step, size_t m_max, double* out) {
  return guarded([&] {
    require(K, "K");
    require(T, "T");
    require(out, "out");
    *out = ehz::brute_force_oracle(K->spec.polytope, T->spec.polytope, step, m_max);
  });
}

ehz_status ehz_identities(const ehz_body* K, const ehz_body* T, size_t m_max, char** out_json) {
  return guarded([&] {
    require(K, "K");
    require(T, "T");
    require(out_json, "out_json");
    *out_json = dup_string(ehz::io::identities_to_json(ehz::theorem_identities(K->spec.polytope, T->spec.polytope, m_max)));
  });
}

ehz_status ehz_length(const ehz_body* T, const char* q_json, double* out) {
  return guarded([&] {
    require(T, "T");
    require(out, "out");
    *out = ehz::length_ellT(T->spec.polytope, curve_arg(q_json, "q_json"));
  });
}

ehz_status ehz_fcp_check(const ehz_body* K, const char* q_json, double tol, char** out_json, int* in_F) {
  return guarded([&] {
    require(K, "K");
    require(out_json, "out_json");
    const auto cert = ehz::fcp_certificate(K->spec.polytope, curve_arg(q_json, "q_json"), tol);
    *out_json = dup_string(ehz::io::certificate_to_json(cert));
    if (in_F != nullptr) *in_F = cert.in_F ? 1 : 0;
  });
}

ehz_status ehz_reduce(const ehz_body* K, const ehz_body* T, const char* q_json, double tol, char** out_json) {
  return guarded([&] {
    require(K, "K");
    require(T, "T");
    require(out_json, "out_json");
    const auto q = ehz::canonicalize(curve_arg(q_json, "q_json"));
    const auto r = ehz::reduce_to_n_plus_1(K->spec.polytope, T->spec.polytope, q, tol);
    *out_json = dup_string(ehz::io::curve_to_json(r.points()));
  });
}

ehz_status ehz_extract_dual(const ehz_body* K, const ehz_body* T, const char* q_json, double tol, char** out_json) {
  return guarded([&] {
    require(K, "K");
    require(T, "T");
    require(out_json, "out_json");
    const auto p = ehz::extract_dual(K->spec.polytope, T->spec.polytope, curve_arg(q_json, "q_json"), tol);
    *out_json = dup_string(ehz::io::curve_to_json(p));
  });
}

ehz_status ehz_verify_strong(const ehz_body* K, const ehz_body* T, const char* q_json, const char* p_json, double tol,
                             char** out_json, int* passed) {
  return guarded([&] {
    require(K, "K");
    require(T, "T");
    require(out_json, "out_json");
    const auto rep = ehz::verify_strong(K->spec.polytope, T->spec.polytope, curve_arg(q_json, "q_json"),
                                        curve_arg(p_json, "p_json"), tol);
    *out_json = dup_string(ehz::io::strong_report_to_json(rep));
    if (passed != nullptr) *passed = rep.passed ? 1 : 0;
  });
}

ehz_status ehz_verify_weak(const ehz_body* K, const ehz_body* T, const char* q_json, double tol, char** out_json,
                           int* passed) {
  return guarded([&] {
    require(K, "K");
    require(T, "T");
    require(out_json, "out_json");
    const auto rep = ehz::verify_weak(K->spec.polytope, T->spec.polytope, curve_arg(q_json, "q_json"), tol);
    *out_json = dup_string(ehz::io::weak_report_to_json(rep));
    if (passed != nullptr) *passed = rep.passed ? 1 : 0;
  });
}

ehz_status ehz_study_continuity(const ehz_body* base, const ehz_body* T, const double* deltas, size_t num_deltas,
                                uint64_t seed, int samples, char** out_csv) {
  return guarded([&] {
    require(base, "base");
    require(T, "T");
    require(out_csv, "out_csv");
    if (num_deltas > 0) require(deltas, "deltas");
    const std::vector<double> ds(deltas, deltas + num_deltas);
    *out_csv = dup_string(ehz::continuity_csv(ehz::continuity_study(base->spec, T->spec.polytope, ds, seed, samples)));
  });
}

ehz_status ehz_study_symmetry(const ehz_body* const* tables, const ehz_body* const* lengths, size_t count,
                              char** out_csv) {
  return guarded([&] {
    require(out_csv, "out_csv");
    if (count > 0) {
      require(tables, "tables");
      require(lengths, "lengths");
    }
    std::vector<ehz::BodySpec> ks, ts;
    for (size_t i = 0; i < count; ++i) {
      require(tables[i], "tables[i]");
      require(lengths[i], "lengths[i]");
      ks.push_back(tables[i]->spec);
      ts.push_back(lengths[i]->spec);
    }
    *out_csv = dup_string(ehz::symmetry_csv(ehz::symmetry_study(ks, ts)));
  });
}

}  // extern "C"
