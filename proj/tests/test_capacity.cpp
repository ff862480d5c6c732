#include <chrono>

#include "doctest.h"
#include "ehz/capacity.hpp"
#include "ehz/corpus.hpp"
#include "ehz/errors.hpp"
#include "support.hpp"

using namespace ehz;
using testing::Gen;
using testing::v2;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ehz::Error");
  return ErrorCode::kInvalidArgument;
}

ConvexPolytope body(const char* name) { return named_body(name).polytope; }

}  // namespace

TEST_CASE("capacity: assignment enumeration on small tables") {
  // Square: two opposite pairs, and four triples in both orientations.
  const auto sq = enumerate_assignments(body("square"), 3);
  CHECK(sq.size() == 10);
  CHECK(enumerate_assignments(body("square"), 2).size() == 2);
  CHECK(enumerate_assignments(body("triangle"), 3).size() == 2);
  CHECK(enumerate_assignments(body("triangle"), 2).empty());
  for (const auto& a : sq) {
    CHECK(a.facets.front() == *std::min_element(a.facets.begin(), a.facets.end()));
    CHECK(origin_in_normal_hull(body("square"), a.facets));
  }
  CHECK(std::is_sorted(sq.begin(), sq.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  }));
  CHECK_FALSE(origin_in_normal_hull(body("square"), {0, 2}));
  // Cube: three opposite pairs among the two-element assignments.
  CHECK(enumerate_assignments(body("cube"), 2).size() == 3);
}

TEST_CASE("capacity: per-assignment optimum on the square") {
  const auto sq = body("square");
  const auto sol = solve_assignment(sq, sq, FacetAssignment{{0, 1}});
  CHECK(sol.value == doctest::Approx(4.0));
  REQUIRE(sol.points.size() == 2);
  CHECK(sol.points[0][0] == doctest::Approx(1.0));
  CHECK(sol.points[1][0] == doctest::Approx(-1.0));
  CHECK(sol.momenta.size() == 2);
  // A triple of sides costs at least as much as the best pair.
  for (const auto& a : enumerate_assignments(sq, 3)) CHECK(solve_assignment(sq, sq, a).value >= 4.0 - 1e-9);
}

TEST_CASE("capacity: corpus anchors agree with the boundary-sampling reference") {
  struct Case {
    const char* K;
    const char* T;
    double expected;
    double step;
  };
  for (const Case c : {Case{"square", "square", 4.0, 0.25}, Case{"square", "cross-polytope", 4.0, 0.25},
                       Case{"triangle", "square", 2.0, 0.25}, Case{"square", "triangle", 2.0, 0.25}}) {
    CAPTURE(c.K);
    CAPTURE(c.T);
    const auto K = body(c.K), T = body(c.T);
    // The reference grid contains an optimal curve for these pairs.
    const double ref = testing::reference_capacity_2d(K, centered_for_length(T), c.step);
    CHECK(ref == doctest::Approx(c.expected).epsilon(1e-12));
    const auto res = capacity(K, T);
    CHECK(std::abs(res.value - c.expected) <= 1e-6);
    CHECK(res.identities_ok);
    CHECK(res.billiard_curve.has_value());
    CHECK(testing::cannot_translate_inside(K, res.curve.points()));
  }
}

TEST_CASE("capacity: cube anchor from the coordinate-extent bound") {
  const auto cube = body("cube");
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = capacity(cube, cube);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(std::abs(res.value - 4.0) <= 1e-6);
  CHECK(secs < 30.0);
  // Not translatable into the open cube forces extent >= 2 in some coordinate,
  // and a closed curve covers that extent twice in the l1 length.
  double extent = 0.0;
  for (int i = 0; i < 3; ++i) {
    double lo = 1e300, hi = -1e300;
    for (const auto& p : res.curve.points()) {
      lo = std::min(lo, p[i]);
      hi = std::max(hi, p[i]);
    }
    extent = std::max(extent, hi - lo);
  }
  CHECK(extent >= 2.0 - 1e-9);
  CHECK(testing::curve_length(cube, res.curve.points()) == doctest::Approx(res.value));
}

TEST_CASE("capacity: random pairs never exceed the sampling reference") {
  Gen g(41);
  for (int trial = 0; trial < 12; ++trial) {
    const auto K = testing::random_polygon(g, g.integer(3, 7));
    const auto T = testing::random_polygon(g, g.integer(3, 7));
    const double v = capacity_value(K, T);
    const double ref = testing::reference_capacity_2d(K, T, 0.1);
    CHECK(v <= ref + 1e-8);
    CHECK(ref <= 1.05 * v);
    const double ora = brute_force_oracle(K, T, 0.1);
    CHECK(ora >= v - 1e-8);
  }
}

TEST_CASE("capacity: scaling, monotonicity and translation of the length body") {
  Gen g(42);
  for (int trial = 0; trial < 8; ++trial) {
    const auto K = testing::random_polygon(g, g.integer(3, 7));
    const auto T = testing::random_polygon(g, g.integer(3, 7));
    const double v = capacity_value(K, T);
    for (double lam : {0.5, 2.0}) {
      for (double mu : {0.5, 2.0}) {
        const double s = capacity_value(testing::scaled(K, lam), testing::scaled(T, mu));
        CHECK(std::abs(s - lam * mu * v) <= 1e-8 * lam * mu * v);
      }
    }
    CHECK(capacity_value(testing::scaled(K, 0.9), T) <= v + 1e-8);
    CHECK(std::abs(capacity_value(K, translate(T, v2(0.05, -0.03))) - v) <= 1e-8 * (1 + v));
  }
}

TEST_CASE("capacity: identities over negations and exchange") {
  Gen g(43);
  for (int trial = 0; trial < 6; ++trial) {
    const auto K = testing::random_polygon(g, g.integer(3, 7));
    const auto T = testing::random_polygon(g, g.integer(3, 7));
    const auto rep = theorem_identities(K, T);
    REQUIRE(rep.values.size() == 5);
    REQUIRE(rep.labels.size() == 5);
    double dev = 0.0;
    for (double a : rep.values) {
      for (double b : rep.values) dev = std::max(dev, testing::rel_dev(a, b));
    }
    CHECK(dev <= 1e-6);
    CHECK(rep.max_relative_deviation == doctest::Approx(dev).epsilon(1e-6));
    CHECK(rep.values[1] == doctest::Approx(capacity_value(T, K)).epsilon(1e-9));
  }
}

TEST_CASE("capacity: results do not depend on the thread count") {
  Gen g(44);
  const auto K = testing::random_polygon(g, 7);
  const auto T = testing::random_polygon(g, 6);
  CapacityOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = capacity(K, T, one);
  const auto b = capacity(K, T, many);
  CHECK(a.value == b.value);
  CHECK(a.assignment == b.assignment);
  REQUIRE(a.curve.size() == b.curve.size());
  for (std::size_t j = 0; j < a.curve.size(); ++j) CHECK(a.curve[j] == b.curve[j]);
}

TEST_CASE("capacity: oracle and grids") {
  const auto sq = body("square");
  CHECK(brute_force_oracle(sq, sq, 0.25) == doctest::Approx(4.0));
  CHECK(brute_force_oracle(body("triangle"), sq, 0.25) == doctest::Approx(2.0));
  const auto grid = boundary_grid(sq, 0.5);
  CHECK(grid.size() == 16);
  for (const auto& p : grid) CHECK(contains(sq, p) == Location::kBoundary);
  CHECK(code_of([&] { brute_force_oracle(sq, sq, -1.0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("capacity: input validation") {
  const auto sq = body("square"), cube = body("cube");
  CHECK(code_of([&] { capacity(sq, cube); }) == ErrorCode::kDimensionMismatch);
  CapacityOptions opt;
  opt.m_max = 1;
  CHECK(code_of([&] { capacity(sq, sq, opt); }) == ErrorCode::kInvalidArgument);
  CHECK(relative_deviation(1.0, 1.0) == 0.0);
  CHECK(relative_deviation(0.0, 0.0) == 0.0);
  CHECK(relative_deviation(2.0, 1.0) == doctest::Approx(0.5));
  const auto tri = body("triangle");
  CHECK(length_shift(sq).norm() == 0.0);
  CHECK(origin_interior(centered_for_length(tri)));
}
