#include <cmath>
#include <string>

#include "doctest.h"
#include "ehz/ehz.h"

namespace {

struct Body {
  ehz_body* ptr = nullptr;
  ~Body() { ehz_body_free(ptr); }
};

struct Str {
  char* ptr = nullptr;
  ~Str() { ehz_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

}  // namespace

TEST_CASE("c api: capacity of the named square pair") {
  Body K, T;
  REQUIRE(ehz_body_named("square", &K.ptr) == EHZ_OK);
  REQUIRE(ehz_body_named("square", &T.ptr) == EHZ_OK);
  CHECK(ehz_body_dim(K.ptr) == 2);
  ehz_options opt;
  ehz_options_default(&opt);
  CHECK(opt.m_max == 0);
  CHECK(opt.symmetric == 1);
  ehz_result* res = nullptr;
  REQUIRE(ehz_capacity(K.ptr, T.ptr, &opt, &res) == EHZ_OK);
  CHECK(std::abs(ehz_result_value(res) - 4.0) <= 1e-6);
  CHECK(ehz_result_identities_ok(res) == 1);
  CHECK(ehz_result_has_billiard(res) == 1);
  Str json;
  REQUIRE(ehz_result_to_json(res, &json.ptr) == EHZ_OK);
  CHECK(json.str().find("\"value\"") != std::string::npos);
  ehz_result_free(res);
}

TEST_CASE("c api: curve operations") {
  Body sq;
  REQUIRE(ehz_body_named("square", &sq.ptr) == EHZ_OK);
  const char* q = R"({"points": [[-1, 0], [1, 0]]})";
  double len = 0.0;
  REQUIRE(ehz_length(sq.ptr, q, &len) == EHZ_OK);
  CHECK(len == doctest::Approx(4.0));
  int in_F = 0;
  Str cert;
  REQUIRE(ehz_fcp_check(sq.ptr, q, 1e-8, &cert.ptr, &in_F) == EHZ_OK);
  CHECK(in_F == 1);
  Str p;
  REQUIRE(ehz_extract_dual(sq.ptr, sq.ptr, q, 1e-8, &p.ptr) == EHZ_OK);
  int passed = 0;
  Str strong, weak;
  REQUIRE(ehz_verify_strong(sq.ptr, sq.ptr, q, p.ptr, 1e-8, &strong.ptr, &passed) == EHZ_OK);
  CHECK(passed == 1);
  REQUIRE(ehz_verify_weak(sq.ptr, sq.ptr, q, 1e-8, &weak.ptr, &passed) == EHZ_OK);
  CHECK(passed == 1);
  double ora = 0.0;
  REQUIRE(ehz_oracle(sq.ptr, sq.ptr, 0.25, 0, &ora) == EHZ_OK);
  CHECK(ora == doctest::Approx(4.0));
}

TEST_CASE("c api: errors carry a status and a message") {
  ehz_body* b = nullptr;
  CHECK(ehz_body_from_json("{\"dim\": 2", &b) == EHZ_ERR_PARSE);
  CHECK(b == nullptr);
  CHECK(std::string(ehz_last_error()).find("malformed") != std::string::npos);
  CHECK(ehz_body_named("nonesuch", &b) == EHZ_ERR_INVALID_ARGUMENT);
  CHECK(ehz_body_named(nullptr, &b) == EHZ_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ehz_status_name(EHZ_ERR_PARSE)) != "unknown");
  CHECK(std::string(ehz_status_name(EHZ_OK)) == "ok");

  Body sq, cube;
  REQUIRE(ehz_body_named("square", &sq.ptr) == EHZ_OK);
  REQUIRE(ehz_body_named("cube", &cube.ptr) == EHZ_OK);
  ehz_result* res = nullptr;
  CHECK(ehz_capacity(sq.ptr, cube.ptr, nullptr, &res) == EHZ_ERR_DIMENSION_MISMATCH);
  CHECK(res == nullptr);
  Str out;
  CHECK(ehz_extract_dual(sq.ptr, sq.ptr, R"({"points": [[-1, 0], [1, 0.5]]})", 1e-8, &out.ptr) ==
        EHZ_ERR_NOT_A_BILLIARD);
  CHECK(ehz_hausdorff(sq.ptr, cube.ptr) < 0.0);
}

TEST_CASE("c api: generated bodies and studies") {
  Body a, b, base, moved;
  REQUIRE(ehz_body_random_polygon(6, 12, &a.ptr) == EHZ_OK);
  REQUIRE(ehz_body_random_polygon(5, 13, &b.ptr) == EHZ_OK);
  Str ja, jb;
  REQUIRE(ehz_body_to_json(a.ptr, &ja.ptr) == EHZ_OK);
  Body again;
  REQUIRE(ehz_body_from_json(ja.ptr, &again.ptr) == EHZ_OK);
  REQUIRE(ehz_body_to_json(again.ptr, &jb.ptr) == EHZ_OK);
  CHECK(ja.str() == jb.str());

  const ehz_body* ks[] = {a.ptr};
  const ehz_body* ts[] = {b.ptr};
  Str sym;
  REQUIRE(ehz_study_symmetry(ks, ts, 1, &sym.ptr) == EHZ_OK);
  CHECK(sym.str().rfind("pair,value_KT,value_TK,value_negK_T,value_K_negT,value_negK_negT,max_rel_dev\n", 0) == 0);

  REQUIRE(ehz_body_named("square", &base.ptr) == EHZ_OK);
  const double deltas[] = {1e-2, 1e-3};
  Str csv;
  REQUIRE(ehz_study_continuity(base.ptr, base.ptr, deltas, 2, 1, 1, &csv.ptr) == EHZ_OK);
  CHECK(csv.str().rfind("delta,d_hausdorff,capacity,identity_dev\n", 0) == 0);
  REQUIRE(ehz_body_perturbed(base.ptr, 1e-3, 4, &moved.ptr) == EHZ_OK);
  const double d = ehz_hausdorff(base.ptr, moved.ptr);
  CHECK(d >= 0.0);
  CHECK(d <= 1e-3 + 1e-12);
}
