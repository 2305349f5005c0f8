// Independent reference computations used by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "fpp/environment.hpp"
#include "fpp/geodesic.hpp"
#include "fpp/geometry.hpp"
#include "fpp/restricted.hpp"

namespace oracle {

using fpp::Vertex;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::vector<Vertex> neighbours(Vertex v, const fpp::SearchBox& box) {
  std::vector<Vertex> out;
  const Vertex cand[] = {{v.x + 1, v.y}, {v.x - 1, v.y}, {v.x, v.y + 1}, {v.x, v.y - 1}};
  for (auto n : cand)
    if (box.contains(n)) out.push_back(n);
  return out;
}

inline Vertex random_vertex(std::mt19937_64& g, int r) {
  std::uniform_int_distribution<int> c(-r, r);
  return {c(g), c(g)};
}

// Grid [0, w) x [0, h) with random weights in [0.05, 1); every edge leaving it
// costs 1000, so no optimal path ever leaves the grid.
inline fpp::Environment pinned_grid(int w, int h, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  fpp::Overlay o;
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < h; ++y) {
      if (x + 1 < w) o[{x, y, fpp::Orientation::horizontal}] = u(g);
      if (y + 1 < h) o[{x, y, fpp::Orientation::vertical}] = u(g);
    }
  return fpp::Environment(1, fpp::WeightDistribution::constant(1000.0)).with_overlay(o);
}

/// Minimum weight over every simple u-v path inside the box, by plain DFS.
inline double simple_path_min(const fpp::Environment& env, const fpp::SearchBox& box, Vertex u, Vertex v) {
  if (u == v) return 0.0;
  std::vector<Vertex> stack{u};
  double best = kInf;
  std::function<void(double)> dfs = [&](double t) {
    const Vertex cur = stack.back();
    if (cur == v) {
      best = std::min(best, t);
      return;
    }
    for (auto n : neighbours(cur, box)) {
      if (std::find(stack.begin(), stack.end(), n) != stack.end()) continue;
      stack.push_back(n);
      dfs(t + env.weight(cur, n));
      stack.pop_back();
    }
  };
  dfs(0.0);
  return best;
}

/// Sum of weights along a path, accumulated from the first vertex.
inline double sum_along(const fpp::Environment& env, const std::vector<Vertex>& vs) {
  double t = 0.0;
  for (std::size_t i = 1; i < vs.size(); ++i) t += env.weight(vs[i - 1], vs[i]);
  return t;
}

/// Exhaustive minimum over simple paths meeting the restricted-class
/// conditions, searched inside `box`. With hop_bound, condition (4) is applied
/// per endpoint pair; otherwise the box alone confines the search. Weights
/// are nonnegative, so a partial path already at least as costly as the best
/// complete one is abandoned.
inline double restricted_min(const fpp::Environment& env, const fpp::RestrictedQuery& q, const fpp::SearchBox& box,
                             bool hop_bound, std::vector<Vertex>* best_path = nullptr) {
  const auto need = q.J.half_length_ceil();
  auto in_slab = [&](Vertex v) { return fpp::in_tube_slab(q.profile, q.r, q.J, v); };
  auto is_source = [&](Vertex v) { return v.x == q.J.a && std::abs(v.y - q.profile.f(q.J.a)) <= q.r; };
  auto is_target = [&](Vertex v) { return v.x == q.J.b && std::abs(v.y - q.profile.f(q.J.b)) <= q.r; };
  std::int64_t max_hops = 0;
  for (std::int32_t dy = -q.r; dy <= q.r; ++dy)
    for (std::int32_t dz = -q.r; dz <= q.r; ++dz)
      max_hops = std::max(max_hops, fpp::hop_limit(q, {q.J.a, q.profile.f(q.J.a) + dy}, {q.J.b, q.profile.f(q.J.b) + dz}));

  double best = kInf;
  std::vector<Vertex> stack;
  std::function<void(double, int)> dfs = [&](double t, int count) {
    if (t > best) return;
    const Vertex cur = stack.back();
    const auto hops = static_cast<std::int64_t>(stack.size()) - 1;
    if (is_target(cur) && count >= need && (!hop_bound || hops <= fpp::hop_limit(q, stack.front(), cur))) {
      if (t < best) {
        best = t;
        if (best_path) *best_path = stack;
      }
    }
    if (hop_bound && hops >= max_hops) return;
    for (auto n : neighbours(cur, box)) {
      if (q.p_edges.contains(fpp::EdgeKey::between(cur, n))) continue;
      if (std::find(stack.begin(), stack.end(), n) != stack.end()) continue;
      const double w = env.weight(cur, n);
      if (!std::isfinite(w)) continue;
      if (best < kInf && t + w > best) continue;
      stack.push_back(n);
      dfs(t + w, count + ((in_slab(cur) && in_slab(n)) ? 1 : 0));
      stack.pop_back();
    }
  };
  for (std::int32_t dy = -q.r; dy <= q.r; ++dy) {
    const Vertex s{q.J.a, q.profile.f(q.J.a) + dy};
    if (!box.contains(s) || !is_source(s)) continue;
    stack = {s};
    dfs(0.0, 0);
  }
  return best;
}

struct RestrictedCase {
  fpp::Environment env;
  fpp::RestrictedQuery q;
};

/// Small restricted-path instances with tubes of at most 5 x 5 cells. Index 19
/// walls off everything except p's own corridor, so its class is empty. Every
/// fourth case makes in-tube edges expensive except one very cheap edge, which
/// pushes the walk relaxation into revisiting it.
inline RestrictedCase restricted_case(int k, fpp::HopBoundMode mode = fpp::HopBoundMode::relaxed) {
  using fpp::EdgeKey;
  using fpp::Orientation;
  const int len = 2 + k % 3;
  const int r = (k % 5 == 4) ? 2 : 1;
  const double rho2 = 1.0 + 0.25 * (k % 3);
  std::vector<Vertex> vs{{0, 0}};
  const bool bent = k % 4 == 1;
  for (int x = 1; x <= len; ++x) {
    if (bent && x == 2) vs.push_back({1, 1});
    vs.push_back({x, bent && x >= 2 ? 1 : 0});
  }
  const fpp::LatticePath p(vs);
  auto q = fpp::RestrictedQuery::from_path(p, {0, len}, r, rho2, 2.0, mode);
  auto env = fpp::Environment(100 + static_cast<std::uint64_t>(k), fpp::WeightDistribution::uniform(1.0, 2.0));

  fpp::Overlay o;
  const auto box = fpp::restricted_region(q);
  if (k % 4 == 2) {
    for (std::int32_t x = box.lo.x; x <= box.hi.x; ++x)
      for (std::int32_t y = box.lo.y; y <= box.hi.y; ++y) {
        const Vertex v{x, y};
        for (Vertex w : {Vertex{x + 1, y}, Vertex{x, y + 1}})
          if (fpp::in_tube_slab(q.profile, r, q.J, v) && fpp::in_tube_slab(q.profile, r, q.J, w))
            o[EdgeKey::between(v, w)] = 3.0;
      }
    o[EdgeKey::between({0, 1}, {1, 1})] = 0.01;
  }
  if (k == 19) {
    for (std::int32_t x = box.lo.x - 1; x <= box.hi.x + 1; ++x)
      for (std::int32_t y = box.lo.y - 1; y <= box.hi.y + 1; ++y) {
        const EdgeKey h{x, y, Orientation::horizontal}, v{x, y, Orientation::vertical};
        if (!q.p_edges.contains(h)) o[h] = kInf;
        if (!q.p_edges.contains(v)) o[v] = kInf;
      }
  }
  if (!o.empty()) env = env.with_overlay(o);
  return {env, q};
}

/// Copy of env whose weights agree with env exactly on edges with both ends in
/// box and are redrawn from a different seed everywhere else.
inline fpp::Environment resample_outside(const fpp::Environment& env, const fpp::SearchBox& box,
                                         std::uint64_t seed) {
  fpp::Overlay keep;
  for (std::int32_t x = box.lo.x; x <= box.hi.x; ++x)
    for (std::int32_t y = box.lo.y; y <= box.hi.y; ++y) {
      if (x + 1 <= box.hi.x) keep[{x, y, fpp::Orientation::horizontal}] = env.weight(Vertex{x, y}, Vertex{x + 1, y});
      if (y + 1 <= box.hi.y) keep[{x, y, fpp::Orientation::vertical}] = env.weight(Vertex{x, y}, Vertex{x, y + 1});
    }
  return fpp::Environment(seed, env.dist()).with_overlay(keep);
}

}  // namespace oracle
