#include "ehz/corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ehz/errors.hpp"

namespace ehz {

namespace {

constexpr int kMaxAttempts = 64;

// Platform-stable uniform draws: std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Vec in_ball(int dim) {
    for (;;) {
      Vec u(dim);
      for (int i = 0; i < dim; ++i) u[i] = uniform(-1.0, 1.0);
      if (u.squaredNorm() <= 1.0) return u;
    }
  }
  Vec on_sphere(int dim) {
    for (;;) {
      Vec u = in_ball(dim);
      if (u.norm() > 1e-3) return u.normalized();
    }
  }

 private:
  std::mt19937_64 engine_;
};

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Eigen::MatrixXd random_map(Rng& rng, int dim) {
  for (;;) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) a(r, c) += rng.uniform(-0.4, 0.4);
    }
    if (a.determinant() > 0.3) return a;
  }
}

bool acceptable(const ConvexPolytope& p, std::size_t vertices) {
  return p.num_vertices() == vertices && origin_interior(p, 0.05);
}

BodySpec generated(std::string name, ConvexPolytope p, std::string family, std::uint64_t seed,
                   std::vector<double> params) {
  return {std::move(name), std::move(p), {"generated", std::move(family), seed, std::move(params)}};
}

}  // namespace

const std::vector<std::string>& named_body_names() {
  static const std::vector<std::string> names = {"square", "cross-polytope", "triangle",
                                                 "cube",   "octahedron",     "simplex-3d"};
  return names;
}

BodySpec named_body(const std::string& name) {
  auto literal = [&](ConvexPolytope p) { return BodySpec{name, std::move(p), {}}; };
  if (name == "square") {
    // Facet order x+, x-, y+, y-.
    std::vector<Facet> facets = {{vec({1, 0}), 1}, {vec({-1, 0}), 1}, {vec({0, 1}), 1}, {vec({0, -1}), 1}};
    PointSeq vertices = {vec({1, 1}), vec({-1, 1}), vec({-1, -1}), vec({1, -1})};
    return literal(ConvexPolytope::from_representations(std::move(facets), std::move(vertices)));
  }
  if (name == "cross-polytope") {
    return literal(ConvexPolytope::from_vertices({vec({1, 0}), vec({0, 1}), vec({-1, 0}), vec({0, -1})}));
  }
  if (name == "triangle") {
    return literal(ConvexPolytope::from_vertices({vec({0, 0}), vec({1, 0}), vec({0, 1})}));
  }
  if (name == "cube") {
    std::vector<Facet> facets;
    for (int i = 0; i < 3; ++i) {
      for (double s : {1.0, -1.0}) {
        Vec a = Vec::Zero(3);
        a[i] = s;
        facets.push_back({a, 1.0});
      }
    }
    PointSeq vertices;
    for (int mask = 0; mask < 8; ++mask) {
      vertices.push_back(vec({mask & 1 ? -1.0 : 1.0, mask & 2 ? -1.0 : 1.0, mask & 4 ? -1.0 : 1.0}));
    }
    return literal(ConvexPolytope::from_representations(std::move(facets), std::move(vertices)));
  }
  if (name == "octahedron") {
    return literal(ConvexPolytope::from_vertices(
        {vec({1, 0, 0}), vec({-1, 0, 0}), vec({0, 1, 0}), vec({0, -1, 0}), vec({0, 0, 1}), vec({0, 0, -1})}));
  }
  if (name == "simplex-3d") {
    return literal(ConvexPolytope::from_vertices({vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown named body '" + name + "'");
}

BodySpec random_polygon(int k, std::uint64_t seed) {
  if (k < 3) throw Error(ErrorCode::kInvalidArgument, "a polygon needs at least 3 vertices");
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Eigen::MatrixXd a = random_map(rng, 2);
    const Vec shift = vec({rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)});
    PointSeq pts;
    for (int i = 0; i < k; ++i) {
      const double theta = 2.0 * std::numbers::pi * (i + rng.uniform(-0.35, 0.35)) / k;
      pts.push_back(a * vec({std::cos(theta), std::sin(theta)}) + shift);
    }
    try {
      ConvexPolytope p = ConvexPolytope::from_vertices(pts);
      if (acceptable(p, static_cast<std::size_t>(k))) {
        return generated("random-polygon-" + std::to_string(k) + "-" + std::to_string(seed), std::move(p),
                         "random-polygon", seed, {static_cast<double>(k)});
      }
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::kInvalidBody, "random polygon generation kept degenerating");
}

BodySpec random_polytope(int dim, int k, std::uint64_t seed) {
  if (dim < 2 || k < dim + 1) throw Error(ErrorCode::kInvalidArgument, "need at least dim+1 points in dim >= 2");
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Eigen::MatrixXd a = random_map(rng, dim);
    PointSeq pts;
    for (int i = 0; i < k; ++i) pts.push_back(a * rng.on_sphere(dim));
    try {
      ConvexPolytope p = ConvexPolytope::from_vertices(pts);
      if (acceptable(p, static_cast<std::size_t>(k))) {
        return generated("random-polytope-" + std::to_string(dim) + "d-" + std::to_string(k) + "-" +
                             std::to_string(seed),
                         std::move(p), "random-polytope", seed, {static_cast<double>(dim), static_cast<double>(k)});
      }
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::kInvalidBody, "random polytope generation kept degenerating");
}

BodySpec perturbed(const BodySpec& base, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::kInvalidArgument, "delta must be >= 0");
  const std::string name = base.name + "~" + std::to_string(delta) + "-" + std::to_string(seed);
  if (delta == 0.0) return {name, base.polytope, {"generated", "perturbed", seed, {0.0}}};
  Rng rng(seed);
  const int n = base.polytope.dim();
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    PointSeq pts;
    for (const auto& v : base.polytope.vertices()) pts.push_back(v + delta * rng.in_ball(n));
    try {
      return generated(name, ConvexPolytope::from_vertices(pts), "perturbed", seed, {delta});
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::kInvalidBody, "perturbation kept degenerating");
}

}  // namespace ehz
