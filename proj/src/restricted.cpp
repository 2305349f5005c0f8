#include "fpp/restricted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Slices {
  std::vector<Vertex> sources;  // Tube_r ∩ S_a
  std::vector<Vertex> targets;  // Tube_r ∩ S_b
};

Slices tube_slices(const RestrictedQuery& q) {
  Slices s;
  for (std::int32_t dy = -q.r; dy <= q.r; ++dy) {
    s.sources.push_back({q.J.a, q.profile.f(q.J.a) + dy});
    s.targets.push_back({q.J.b, q.profile.f(q.J.b) + dy});
  }
  return s;
}

// Local grid over the dependence region with weights read once.
class RegionGrid {
 public:
  RegionGrid(const Environment& env, const RestrictedQuery& q, const SearchBox& box)
      : box_(box), w_(box.width()), h_(box.height()) {
    const auto n = static_cast<std::size_t>(w_ * h_);
    right_.assign(n, kInf);
    up_.assign(n, kInf);
    tube_.assign(n, 0);
    for (std::int64_t iy = 0; iy < h_; ++iy)
      for (std::int64_t ix = 0; ix < w_; ++ix) {
        const auto i = static_cast<std::size_t>(iy * w_ + ix);
        const Vertex v = vertex(static_cast<std::uint32_t>(i));
        tube_[i] = in_tube_slab(q.profile, q.r, q.J, v) ? 1 : 0;
        if (ix + 1 < w_) right_[i] = env.weight(EdgeKey{v.x, v.y, Orientation::horizontal});
        if (iy + 1 < h_) up_[i] = env.weight(EdgeKey{v.x, v.y, Orientation::vertical});
      }
    // Edges of p itself are excluded.
    for (const auto& e : q.p_edges) {
      const Vertex a{e.x, e.y};
      const bool horiz = e.orientation == Orientation::horizontal;
      const Vertex b = horiz ? Vertex{e.x + 1, e.y} : Vertex{e.x, e.y + 1};
      if (!box.contains(a) || !box.contains(b)) continue;
      (horiz ? right_ : up_)[index(a)] = kInf;
    }
  }

  std::size_t cells() const { return right_.size(); }
  std::uint32_t index(Vertex v) const {
    return static_cast<std::uint32_t>((std::int64_t{v.y} - box_.lo.y) * w_ + (std::int64_t{v.x} - box_.lo.x));
  }
  Vertex vertex(std::uint32_t i) const {
    return {static_cast<std::int32_t>(box_.lo.x + static_cast<std::int64_t>(i) % w_),
            static_cast<std::int32_t>(box_.lo.y + static_cast<std::int64_t>(i) / w_)};
  }
  bool tube(std::uint32_t i) const { return tube_[i] != 0; }

  // Calls fn(neighbour, weight) for the usable edges at i.
  template <class Fn>
  void for_each_edge(std::uint32_t i, Fn&& fn) const {
    const auto w = static_cast<std::uint32_t>(w_);
    if (right_[i] < kInf) fn(i + 1, right_[i]);
    if (i % w != 0 && right_[i - 1] < kInf) fn(i - 1, right_[i - 1]);
    if (up_[i] < kInf) fn(i + w, up_[i]);
    if (i >= w && up_[i - w] < kInf) fn(i - w, up_[i - w]);
  }

  double weight(std::uint32_t i, std::uint32_t j) const {
    const auto lo = std::min(i, j), hi = std::max(i, j);
    return hi == lo + 1 ? right_[lo] : up_[lo];
  }

 private:
  SearchBox box_;
  std::int64_t w_;
  std::int64_t h_;
  std::vector<double> right_;
  std::vector<double> up_;
  std::vector<std::uint8_t> tube_;
};

struct HeapEntry {
  double key;
  std::uint64_t id;
  bool operator>(const HeapEntry& o) const { return key > o.key || (key == o.key && id > o.id); }
};
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

// Cost-to-go over states (vertex, capped in-tube count) for walks ending at a
// target with a saturated count. Doubles as the A* heuristic. The pass stops
// once every source state at the cheapest source cost is settled; states left
// unsettled get the frontier key, a lower bound that keeps the heuristic
// consistent.
struct CostToGo {
  std::uint32_t cap;
  std::vector<double> h;
  std::vector<std::uint32_t> succ;  // next vertex on an optimal walk
  std::int64_t settled = 0;

  std::size_t state(std::uint32_t v, std::uint32_t c) const { return std::size_t{v} * (cap + 1) + c; }
};

CostToGo backward_pass(const RegionGrid& g, const std::vector<std::uint32_t>& sources,
                       const std::vector<std::uint32_t>& targets, std::uint32_t cap) {
  CostToGo ctg{cap, std::vector<double>(g.cells() * (cap + 1), kInf),
               std::vector<std::uint32_t>(g.cells() * (cap + 1), std::numeric_limits<std::uint32_t>::max())};
  std::vector<std::uint8_t> done(ctg.h.size(), 0);
  MinHeap heap;
  for (auto t : targets) {
    const auto s = ctg.state(t, cap);
    ctg.h[s] = 0.0;
    ctg.succ[s] = t;
    heap.push({0.0, s});
  }
  double source_key = kInf;
  while (!heap.empty()) {
    const auto top = heap.top();
    if (top.key > source_key) {
      for (std::size_t s = 0; s < done.size(); ++s)
        if (!done[s]) ctg.h[s] = top.key;
      break;
    }
    heap.pop();
    const auto s = static_cast<std::size_t>(top.id);
    if (done[s] || top.key != ctg.h[s]) continue;
    done[s] = 1;
    if (s % (cap + 1) == 0 && source_key == kInf &&
        std::find(sources.begin(), sources.end(), static_cast<std::uint32_t>(s / (cap + 1))) != sources.end())
      source_key = top.key;
    ++ctg.settled;
    const auto v = static_cast<std::uint32_t>(s / (cap + 1));
    const auto c2 = static_cast<std::uint32_t>(s % (cap + 1));
    g.for_each_edge(v, [&](std::uint32_t u, double w) {
      const std::uint32_t inc = (g.tube(u) && g.tube(v)) ? 1 : 0;
      // Forward step (u, c) -> (v, min(c + inc, cap)) lands on c2.
      auto offer = [&](std::uint32_t c) {
        const auto ps = ctg.state(u, c);
        const double nd = top.key + w;
        if (done[ps]) return;
        if (nd < ctg.h[ps]) {
          ctg.h[ps] = nd;
          ctg.succ[ps] = v;
          heap.push({nd, ps});
        } else if (nd == ctg.h[ps] && v < ctg.succ[ps]) {
          ctg.succ[ps] = v;
        }
      };
      if (c2 < cap) {
        if (c2 >= inc) offer(c2 - inc);
      } else {
        offer(cap);
        if (inc == 1) offer(cap - 1);
      }
    });
  }
  return ctg;
}

struct Label {
  std::uint32_t v;
  std::uint32_t c;
  std::uint32_t hops;
  std::uint32_t root;  // index into sources
  double g;
  std::int64_t parent;
};

}  // namespace

double log_sq(double L) {
  if (L <= 1.0) return 0.0;
  const double l = std::log(L);
  return l * l;
}

RestrictedQuery RestrictedQuery::from_path(const LatticePath& p, IntervalJ J, std::int32_t r, double rho2, double L,
                                           HopBoundMode mode) {
  RestrictedQuery q{pioneer_profile(p), {}, J, r, rho2, L, mode};
  if (!q.profile.in_range(J.a) || !q.profile.in_range(J.b))
    throw std::invalid_argument("restricted query: J endpoints outside X(p)");
  if (r < 1) throw std::invalid_argument("restricted query: r must be >= 1");
  if (!(rho2 > 0.0)) throw std::invalid_argument("restricted query: rho2 must be > 0");
  for (const auto& e : p.edges()) q.p_edges.insert(e);
  return q;
}

std::int64_t hop_limit(const RestrictedQuery& q, Vertex u, Vertex v) {
  const double bound = q.rho2 * std::max(static_cast<double>(l1_distance(u, v)), log_sq(q.L));
  return static_cast<std::int64_t>(std::floor(bound));
}

SearchBox restricted_region(const RestrictedQuery& q) {
  const auto sl = tube_slices(q);
  std::int64_t h_max = 0;
  for (auto u : sl.sources)
    for (auto v : sl.targets) h_max = std::max(h_max, hop_limit(q, u, v));
  // A path from S_a to S_b with at most H edges strays at most (H - |J|) / 2
  // beyond the slab and beyond the ordinates of its endpoints.
  const std::int64_t ext = std::max<std::int64_t>(0, (h_max - q.J.length()) / 2);
  std::vector<Vertex> pts = sl.sources;
  pts.insert(pts.end(), sl.targets.begin(), sl.targets.end());
  return SearchBox::around(pts, ext);
}

RestrictedResult restricted_passage_time(const Environment& env, const RestrictedQuery& q,
                                         const RestrictedOptions& opts) {
  if (!q.profile.in_range(q.J.a) || !q.profile.in_range(q.J.b))
    throw std::invalid_argument("restricted_passage_time: J endpoints outside X(p)");
  if (q.r < 1) throw std::invalid_argument("restricted_passage_time: r must be >= 1");

  RestrictedResult res;
  if (q.J.length() == 0) {
    res.time = 0.0;
    res.path = LatticePath::trivial(q.profile.pioneer(q.J.a));
    return res;
  }

  const auto sl = tube_slices(q);
  const SearchBox box = restricted_region(q);
  const RegionGrid grid(env, q, box);
  const auto cap = static_cast<std::uint32_t>(q.J.half_length_ceil());

  std::vector<std::uint32_t> sources, targets;
  for (auto v : sl.sources) sources.push_back(grid.index(v));
  for (auto v : sl.targets) targets.push_back(grid.index(v));
  std::vector<std::uint8_t> is_target(grid.cells(), 0);
  for (auto t : targets) is_target[t] = 1;

  const CostToGo ctg = backward_pass(grid, sources, targets, cap);
  res.labels_expanded = ctg.settled;

  const bool enforced = q.mode == HopBoundMode::enforced;
  auto hops_ok = [&](std::uint32_t root, Vertex end, std::size_t hops) {
    return static_cast<std::int64_t>(hops) <= hop_limit(q, sl.sources[root], end);
  };

  // Walk relaxation: exact whenever its optimum is already a simple path.
  std::uint32_t best_root = 0;
  for (std::uint32_t k = 1; k < sources.size(); ++k)
    if (ctg.h[ctg.state(sources[k], 0)] < ctg.h[ctg.state(sources[best_root], 0)]) best_root = k;
  if (ctg.h[ctg.state(sources[best_root], 0)] == kInf) return res;  // Q_p(J) is empty

  std::vector<std::uint32_t> walk{sources[best_root]};
  for (std::uint32_t c = 0;;) {
    const auto v = walk.back();
    if (c == cap && is_target[v]) break;
    if (walk.size() > ctg.h.size()) break;  // zero-weight cycle; not simple
    const auto next = ctg.succ[ctg.state(v, c)];
    c = std::min(c + ((grid.tube(v) && grid.tube(next)) ? 1u : 0u), cap);
    walk.push_back(next);
  }
  std::vector<std::uint32_t> sorted = walk;
  std::sort(sorted.begin(), sorted.end());
  const bool simple = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() &&
                      walk.size() <= ctg.h.size();

  auto finish = [&](const std::vector<std::uint32_t>& cells, std::uint32_t root) {
    std::vector<Vertex> vs;
    vs.reserve(cells.size());
    double t = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      vs.push_back(grid.vertex(cells[i]));
      if (i > 0) t += grid.weight(cells[i - 1], cells[i]);
    }
    res.time = t;
    res.hop_bound_ok = hops_ok(root, vs.back(), cells.size() - 1);
    res.path.emplace(std::move(vs));
  };

  if (simple && (!enforced || hops_ok(best_root, grid.vertex(walk.back()), walk.size() - 1))) {
    finish(walk, best_root);
    return res;
  }

  // Elementary best-first search over simple partial paths.
  res.elementary_search = true;
  std::vector<std::int64_t> root_hops(sources.size(), 0);
  for (std::uint32_t k = 0; k < sources.size(); ++k)
    for (auto t : sl.targets) root_hops[k] = std::max(root_hops[k], hop_limit(q, sl.sources[k], t));

  std::vector<Label> labels;
  MinHeap open;
  for (std::uint32_t k = 0; k < sources.size(); ++k) {
    const double hk = ctg.h[ctg.state(sources[k], 0)];
    if (hk == kInf) continue;
    labels.push_back({sources[k], 0, 0, k, 0.0, -1});
    open.push({hk, labels.size() - 1});
  }
  auto on_path = [&](std::int64_t id, std::uint32_t v) {
    for (; id >= 0; id = labels[static_cast<std::size_t>(id)].parent)
      if (labels[static_cast<std::size_t>(id)].v == v) return true;
    return false;
  };

  // Expanded labels per state (vertex, count) as sorted visited sets. Labels at
  // one state pop in order of cost, so a label whose visited set contains an
  // earlier one's (same root, no more hops) has no completion the earlier
  // label lacks, and is dropped.
  struct Expanded {
    std::uint32_t root;
    std::uint32_t hops;
    std::vector<std::uint32_t> visited;
  };
  std::vector<std::vector<Expanded>> expanded(ctg.h.size());
  auto visited_of = [&](std::int64_t id) {
    std::vector<std::uint32_t> vs;
    for (; id >= 0; id = labels[static_cast<std::size_t>(id)].parent) vs.push_back(labels[static_cast<std::size_t>(id)].v);
    std::sort(vs.begin(), vs.end());
    return vs;
  };

  std::int64_t popped = 0;
  while (!open.empty()) {
    const auto id = static_cast<std::int64_t>(open.top().id);
    open.pop();
    const Label cur = labels[static_cast<std::size_t>(id)];
    auto visited = visited_of(id);
    auto& seen = expanded[ctg.state(cur.v, cur.c)];
    const bool dominated = std::any_of(seen.begin(), seen.end(), [&](const Expanded& e) {
      return (!enforced || (e.root == cur.root && e.hops <= cur.hops)) &&
             std::includes(visited.begin(), visited.end(), e.visited.begin(), e.visited.end());
    });
    if (dominated) continue;
    if (++popped > opts.label_budget) throw std::runtime_error("restricted search exceeded its label budget");
    if (cur.c == cap && is_target[cur.v] && (!enforced || hops_ok(cur.root, grid.vertex(cur.v), cur.hops))) {
      std::vector<std::uint32_t> cells;
      for (auto i = id; i >= 0; i = labels[static_cast<std::size_t>(i)].parent)
        cells.push_back(labels[static_cast<std::size_t>(i)].v);
      std::reverse(cells.begin(), cells.end());
      res.labels_expanded += popped;
      finish(cells, cur.root);
      return res;
    }
    seen.push_back({cur.root, cur.hops, std::move(visited)});
    grid.for_each_edge(cur.v, [&](std::uint32_t n, double w) {
      const std::uint32_t c = std::min(cur.c + ((grid.tube(cur.v) && grid.tube(n)) ? 1u : 0u), cap);
      const double hn = ctg.h[ctg.state(n, c)];
      if (hn == kInf) return;
      if (enforced) {
        const std::int64_t remaining = std::abs(std::int64_t{q.J.b} - grid.vertex(n).x);
        if (static_cast<std::int64_t>(cur.hops) + 1 + remaining > root_hops[cur.root]) return;
      }
      if (on_path(id, n)) return;
      labels.push_back({n, c, cur.hops + 1, cur.root, cur.g + w, id});
      open.push({cur.g + w + hn, labels.size() - 1});
    });
  }
  res.labels_expanded += popped;
  return res;  // no simple path meets the constraints
}

double pioneer_passage_time(const Environment& env, const PioneerProfile& profile, const IntervalJ& J) {
  return passage_time(env, profile.pioneer(J.a), profile.pioneer(J.b));
}

Estimate expected_pioneer_time(const WeightDistribution& dist, const PioneerProfile& profile, const IntervalJ& J,
                               std::size_t k_seeds, std::uint64_t seed, int workers) {
  if (k_seeds < 2) throw std::invalid_argument("expected_pioneer_time: k_seeds must be >= 2");
  const Vertex a = profile.pioneer(J.a), b = profile.pioneer(J.b);
  if (a == b) return {0.0, 0.0, 0.0, k_seeds};
  auto times = run_trials(k_seeds, workers, [&](std::size_t k) {
    const Environment env(rng::derive_seed(seed, k), dist);
    return passage_time(env, a, b);
  });
  return estimate(times);
}

DeviationResult deviation(const Environment& env, const LatticePath& p, const IntervalJ& J, std::size_t k_seeds,
                          std::uint64_t seed, int workers) {
  const auto profile = pioneer_profile(p);
  DeviationResult out;
  out.subpath_time = path_time(env, subpath_between(p, profile.pioneer(J.a), profile.pioneer(J.b)));
  out.expected = expected_pioneer_time(env.dist(), profile, J, k_seeds, seed, workers);
  out.deviation = out.subpath_time - out.expected.mean;
  return out;
}

AttractiveResult attractive_interval(const Environment& env, const LatticePath& gamma, const IntervalJ& J,
                                     const AttractParams& params) {
  const auto q = RestrictedQuery::from_path(gamma, J, params.r, params.rho2, params.L, params.mode);
  AttractiveResult out;
  out.restricted_time = restricted_passage_time(env, q).time;
  out.pioneer_time = pioneer_passage_time(env, q.profile, J);
  out.threshold = out.pioneer_time + 2.0 * params.rho1 * std::max(static_cast<double>(params.r), log_sq(params.L));
  out.attractive = out.restricted_time > out.threshold;
  return out;
}

}  // namespace fpp
