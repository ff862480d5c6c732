#include <algorithm>

#include "doctest.h"
#include "ehz/corpus.hpp"
#include "ehz/errors.hpp"
#include "ehz/geometry.hpp"
#include "support.hpp"

using namespace ehz;
using testing::Gen;
using testing::v2;
using testing::v3;

namespace {

std::vector<ConvexPolytope> sample_bodies(Gen& g) {
  std::vector<ConvexPolytope> out;
  for (const auto& name : named_body_names()) {
    const auto body = named_body(name).polytope;
    if (origin_interior(body)) out.push_back(body);
  }
  for (int i = 0; i < 6; ++i) out.push_back(testing::random_polygon(g, g.integer(3, 8)));
  for (int i = 0; i < 3; ++i) out.push_back(testing::random_polytope3(g, g.integer(0, 8)));
  return out;
}

bool same_vertex_set(const PointSeq& a, const PointSeq& b, double tol) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const Vec& x) {
    return std::any_of(b.begin(), b.end(), [&](const Vec& y) { return (x - y).norm() <= tol; });
  });
}

}  // namespace

TEST_CASE("geometry: square representations agree") {
  const auto sq = named_body("square").polytope;
  CHECK(sq.dim() == 2);
  CHECK(sq.num_facets() == 4);
  CHECK(sq.num_vertices() == 4);
  CHECK(sq.diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));
  for (std::size_t i = 0; i < sq.num_facets(); ++i) {
    CHECK(sq.facets()[i].normal.norm() == doctest::Approx(1.0));
    CHECK(sq.facet_vertices(i).size() == 2);
  }
}

TEST_CASE("geometry: halfspace input is normalised and redundant rows dropped") {
  const auto p = ConvexPolytope::from_halfspaces({v2(2, 0), v2(-1, 0), v2(0, 3), v2(0, -1), v2(1, 1)},
                                                 {2.0, 1.0, 3.0, 1.0, 5.0});
  CHECK(p.num_facets() == 4);
  for (const auto& f : p.facets()) CHECK(f.offset == doctest::Approx(1.0));
}

TEST_CASE("geometry: invalid bodies are rejected") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return static_cast<int>(e.code());
    }
    return 0;
  };
  // Unbounded.
  CHECK(code_of([] { ConvexPolytope::from_halfspaces({v2(1, 0), v2(0, 1)}, {1.0, 1.0}); }) != 0);
  // Lower dimensional.
  CHECK(code_of([] { ConvexPolytope::from_vertices({v2(0, 0), v2(1, 1), v2(2, 2)}); }) != 0);
  // Mismatched representations.
  const auto sq = named_body("square").polytope;
  CHECK(code_of([&] { ConvexPolytope::from_representations(sq.facets(), {v2(1, 1), v2(-1, 1), v2(-1, -1)}); }) != 0);
}

TEST_CASE("geometry: support function matches the vertex maximum and is sublinear") {
  Gen g(11);
  for (const auto& P : sample_bodies(g)) {
    for (int trial = 0; trial < 40; ++trial) {
      const Vec u = g.vector(P.dim(), -2, 2), v = g.vector(P.dim(), -2, 2);
      const double lam = g.uniform(0, 5);
      CHECK(support_value(P, u) == doctest::Approx(testing::support(P, u)).epsilon(1e-12));
      CHECK(support_value(P, u + v) <= support_value(P, u) + support_value(P, v) + 1e-9);
      CHECK(std::abs(support_value(P, lam * v) - lam * support_value(P, v)) <= 1e-9);
      const auto sv = support_function(P, u);
      REQUIRE(!sv.argmax_vertices.empty());
      for (auto i : sv.argmax_vertices) CHECK(P.vertices()[i].dot(u) == doctest::Approx(sv.value));
    }
  }
}

TEST_CASE("geometry: polar duality and involution") {
  Gen g(12);
  for (const auto& T : sample_bodies(g)) {
    const auto Tp = polar(T);
    for (int trial = 0; trial < 30; ++trial) {
      const Vec v = g.vector(T.dim(), -2, 2);
      CHECK(std::abs(minkowski_functional(Tp, v) - support_value(T, v)) <= 1e-8);
    }
    CHECK(same_vertex_set(polar(Tp).vertices(), T.vertices(), 1e-7));
  }
}

TEST_CASE("geometry: a vertex attains the support iff the direction is in its normal cone") {
  Gen g(13);
  for (const auto& T : sample_bodies(g)) {
    for (int trial = 0; trial < 15; ++trial) {
      const Vec v = g.vector(T.dim(), -1, 1);
      const auto sv = support_function(T, v);
      for (std::size_t i = 0; i < T.num_vertices(); ++i) {
        const bool argmax = std::find(sv.argmax_vertices.begin(), sv.argmax_vertices.end(), i) != sv.argmax_vertices.end();
        CHECK(cone_contains(normal_cone(T, T.vertices()[i]), v) == argmax);
      }
    }
  }
}

TEST_CASE("geometry: location and normal cones on the square") {
  const auto sq = named_body("square").polytope;
  CHECK(contains(sq, v2(0, 0)) == Location::kInterior);
  CHECK(contains(sq, v2(1, 0.3)) == Location::kBoundary);
  CHECK(contains(sq, v2(1.1, 0)) == Location::kOutside);
  CHECK(normal_cone(sq, v2(0, 0)).trivial());
  CHECK(normal_cone(sq, v2(1, 0.3)).generators.size() == 1);
  CHECK(normal_cone(sq, v2(1, 1)).generators.size() == 2);
  CHECK(cone_contains(normal_cone(sq, v2(1, 1)), v2(2, 0.5)));
  CHECK_FALSE(cone_contains(normal_cone(sq, v2(1, 1)), v2(-0.1, 1)));
  CHECK(cone_residual(normal_cone(sq, v2(1, 0)), v2(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("geometry: projection and distance") {
  const auto sq = named_body("square").polytope;
  CHECK(distance_to(sq, v2(3, 0)) == doctest::Approx(2.0));
  CHECK(distance_to(sq, v2(2, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(distance_to(sq, v2(0.5, 0.5)) == doctest::Approx(0.0));
  const Vec p = project_onto_hull(sq.vertices(), v2(3, 0.25));
  CHECK((p - v2(1, 0.25)).norm() <= 1e-9);
  // Projection residual is orthogonal to every vertex direction (first-order optimality).
  Gen g(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto P = testing::random_polygon(g, g.integer(3, 8));
    const Vec x = g.vector(2, -4, 4);
    const Vec y = project_onto_hull(P.vertices(), x);
    for (const auto& w : P.vertices()) CHECK((x - y).dot(w - y) <= 1e-8);
  }
}

TEST_CASE("geometry: Hausdorff distance is a metric on the corpus") {
  Gen g(15);
  std::vector<ConvexPolytope> planar;
  for (const char* n : {"square", "cross-polytope", "triangle"}) planar.push_back(named_body(n).polytope);
  for (int i = 0; i < 3; ++i) planar.push_back(testing::random_polygon(g, g.integer(3, 7)));
  for (const auto& a : planar) {
    CHECK(hausdorff_distance(a, a) <= 1e-9);
    for (const auto& b : planar) {
      CHECK(hausdorff_distance(a, b) == hausdorff_distance(b, a));
      for (const auto& c : planar) {
        CHECK(hausdorff_distance(a, c) <= hausdorff_distance(a, b) + hausdorff_distance(b, c) + 1e-8);
      }
    }
  }
  // Square against the inscribed diamond: farthest square point is a corner.
  CHECK(hausdorff_distance(planar[0], planar[1]) == doctest::Approx(std::sqrt(2.0) / 2.0));
}

TEST_CASE("geometry: affine images and the Chebyshev ball") {
  const auto tri = named_body("triangle").polytope;
  CHECK_FALSE(origin_interior(tri));
  const auto ball = chebyshev_ball(tri);
  const double r = 1.0 / (2.0 + std::sqrt(2.0));
  CHECK(ball.radius == doctest::Approx(r));
  CHECK((ball.center - v2(r, r)).norm() <= 1e-9);
  const auto moved = translate(tri, -ball.center);
  CHECK(origin_interior(moved));
  const auto neg = negate(named_body("simplex-3d").polytope);
  CHECK(contains(neg, v3(-0.2, -0.2, -0.2)) == Location::kInterior);
  const auto big = affine_image(named_body("cube").polytope, 2.0, v3(1, 0, 0));
  CHECK(support_value(big, v3(1, 0, 0)) == doctest::Approx(3.0));
  CHECK(support_value(big, v3(-1, 0, 0)) == doctest::Approx(1.0));
}
