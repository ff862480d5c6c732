#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "ehz/capacity.hpp"
#include "ehz/errors.hpp"
#include "ehz/lp.hpp"

namespace ehz {

namespace {

// Orthonormal basis of the affine hull of `pts` relative to pts[0].
std::vector<Vec> intrinsic_basis(const PointSeq& pts, int rank) {
  std::vector<Vec> basis;
  for (std::size_t i = 1; i < pts.size() && static_cast<int>(basis.size()) < rank; ++i) {
    Vec d = pts[i] - pts[0];
    for (const auto& b : basis) d -= d.dot(b) * b;
    if (d.norm() > 1e-9 * (1.0 + (pts[i] - pts[0]).norm())) basis.push_back(d.normalized());
  }
  return basis;
}

void push_unique(PointSeq& out, const Vec& x, double tol) {
  for (const auto& y : out) {
    if ((x - y).cwiseAbs().maxCoeff() <= tol) return;
  }
  out.push_back(x);
}

// Visits every point of the lattice lo + step*k inside [lo, hi] (per axis).
template <typename Fn>
void for_each_lattice_point(const Vec& lo, const Vec& hi, double step, Fn&& fn) {
  const auto d = lo.size();
  std::vector<long> count(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) count[static_cast<std::size_t>(i)] = static_cast<long>(std::floor((hi[i] - lo[i]) / step + 1e-9));
  std::vector<long> k(static_cast<std::size_t>(d), 0);
  for (;;) {
    Vec c(d);
    for (Eigen::Index i = 0; i < d; ++i) c[i] = lo[i] + step * static_cast<double>(k[static_cast<std::size_t>(i)]);
    fn(c);
    std::size_t i = 0;
    while (i < k.size() && k[i] == count[i]) k[i++] = 0;
    if (i == k.size()) return;
    ++k[i];
  }
}

}  // namespace

PointSeq boundary_grid(const ConvexPolytope& body, double grid_step) {
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    throw Error(ErrorCode::kInvalidArgument, "grid step must be positive");
  }
  const int n = body.dim();
  const double tol = 1e-12 * (1.0 + body.diameter());
  PointSeq out;
  for (std::size_t i = 0; i < body.num_facets(); ++i) {
    PointSeq fv;
    for (auto v : body.facet_vertices(i)) fv.push_back(body.vertices()[v]);
    for (const auto& v : fv) push_unique(out, v, tol);
    const auto basis = intrinsic_basis(fv, n - 1);
    if (static_cast<int>(basis.size()) != n - 1) continue;
    Vec lo = Vec::Constant(n - 1, lp::kInf);
    Vec hi = Vec::Constant(n - 1, -lp::kInf);
    for (const auto& v : fv) {
      for (int c = 0; c < n - 1; ++c) {
        const double t = basis[static_cast<std::size_t>(c)].dot(v - fv[0]);
        lo[c] = std::min(lo[c], t);
        hi[c] = std::max(hi[c], t);
      }
    }
    for_each_lattice_point(lo, hi, grid_step, [&](const Vec& c) {
      Vec x = fv[0];
      for (int k = 0; k < n - 1; ++k) x += c[k] * basis[static_cast<std::size_t>(k)];
      if (contains(body, x, 1e-9) == Location::kBoundary) push_unique(out, x, tol);
    });
  }
  return out;
}

double brute_force_oracle(const ConvexPolytope& table, const ConvexPolytope& length_body, double grid_step,
                          std::size_t m_max) {
  if (table.dim() != length_body.dim()) throw Error(ErrorCode::kDimensionMismatch, "bodies have different dimensions");
  const auto full = static_cast<std::size_t>(table.dim()) + 1;
  if (m_max == 0) m_max = full;
  if (m_max < 2 || m_max > full) throw Error(ErrorCode::kInvalidArgument, "oracle m_max must lie in [2, n+1]");
  if (table.num_facets() > 64) throw Error(ErrorCode::kInvalidArgument, "oracle supports at most 64 facets");

  const ConvexPolytope T = centered_for_length(length_body);
  const PointSeq grid = boundary_grid(table, grid_step);
  const std::size_t N = grid.size();

  // Membership in F depends only on which facets the tuple touches, so the
  // LP verdict is cached per touched-facet mask.
  std::vector<std::uint64_t> touch(N, 0);
  for (std::size_t g = 0; g < N; ++g) {
    for (auto f : active_facets(table, grid[g], 1e-9)) touch[g] |= std::uint64_t{1} << f;
  }
  std::map<std::uint64_t, bool> verdict;
  PointSeq tuple;
  auto in_F = [&](std::uint64_t mask) {
    auto it = verdict.find(mask);
    if (it != verdict.end()) return it->second;
    const bool ok = fcp_certificate(table, tuple).in_F;
    verdict.emplace(mask, ok);
    return ok;
  };

  // Segment lengths h_T(g_b - g_a) >= 0 since 0 is in T, so partial sums prune.
  std::vector<double> seg(N * N, 0.0);
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = 0; b < N; ++b) {
      if (a != b) seg[a * N + b] = support_value(T, grid[b] - grid[a]);
    }
  }

  double best = lp::kInf;
  std::vector<std::size_t> idx;
  for (std::size_t m = 2; m <= m_max; ++m) {
    idx.assign(m, 0);
    // idx[0] is the smallest index; the rest is any arrangement of larger ones.
    std::vector<bool> used(N, false);
    auto recurse = [&](auto&& self, std::size_t depth, double partial, std::uint64_t mask) -> void {
      if (partial >= best) return;
      if (depth == m) {
        const double len = partial + seg[idx[m - 1] * N + idx[0]];
        if (len >= best) return;
        tuple.clear();
        for (auto i : idx) tuple.push_back(grid[i]);
        if (in_F(mask)) best = len;
        return;
      }
      for (std::size_t g = idx[0] + 1; g < N; ++g) {
        if (used[g]) continue;
        used[g] = true;
        idx[depth] = g;
        self(self, depth + 1, partial + seg[idx[depth - 1] * N + g], mask | touch[g]);
        used[g] = false;
      }
    };
    for (std::size_t first = 0; first < N; ++first) {
      idx[0] = first;
      recurse(recurse, 1, 0.0, touch[first]);
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::kGridTooCoarse, "no grid tuple cannot be translated into the interior");
  }
  return best;
}

}  // namespace ehz
