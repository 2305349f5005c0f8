#include "fpp/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kMinMargin = 64;
constexpr std::int64_t kMaxCells = std::int64_t{1} << 31;

// Per-thread scratch arrays, reused across searches. Stamps avoid clearing.
struct Workspace {
  std::vector<double> dist;
  std::vector<std::int32_t> pred;
  std::vector<std::uint32_t> seen;
  std::vector<std::uint32_t> done;
  std::uint32_t epoch = 0;

  void prepare(std::size_t cells) {
    if (dist.size() < cells) {
      dist.resize(cells);
      pred.resize(cells);
      seen.assign(cells, 0);
      done.assign(cells, 0);
      epoch = 0;
    }
    if (++epoch == 0) {
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(done.begin(), done.end(), 0);
      epoch = 1;
    }
  }
};

thread_local Workspace t_workspace;

struct Entry {
  double d;
  std::uint32_t idx;
  // Min-heap on (distance, vertex (y, x)); box indices are row-major in y.
  bool operator>(const Entry& o) const { return d > o.d || (d == o.d && idx > o.idx); }
};

class BoxDijkstra {
 public:
  BoxDijkstra(const Environment& env, SearchBox box, const NeighborOrder& order)
      : env_(env), box_(box), w_(box.width()), h_(box.height()), order_(order), ws_(t_workspace) {
    if (w_ * h_ > kMaxCells) throw std::length_error("search box too large");
    ws_.prepare(static_cast<std::size_t>(w_ * h_));
  }

  std::uint32_t index(Vertex v) const {
    return static_cast<std::uint32_t>((std::int64_t{v.y} - box_.lo.y) * w_ + (std::int64_t{v.x} - box_.lo.x));
  }
  Vertex vertex(std::uint32_t i) const {
    return {static_cast<std::int32_t>(box_.lo.x + static_cast<std::int64_t>(i) % w_),
            static_cast<std::int32_t>(box_.lo.y + static_cast<std::int64_t>(i) / w_)};
  }

  double dist(std::uint32_t i) const { return ws_.seen[i] == ws_.epoch ? ws_.dist[i] : kInf; }
  bool settled(std::uint32_t i) const { return ws_.done[i] == ws_.epoch; }
  double earliest_boundary() const { return earliest_boundary_; }
  std::int64_t settled_count() const { return settled_count_; }

  // Runs until on_settle(vertex, dist) returns true or the box is exhausted.
  template <class OnSettle>
  void run(Vertex source, OnSettle&& on_settle) {
    const auto s = index(source);
    ws_.seen[s] = ws_.epoch;
    ws_.dist[s] = 0.0;
    ws_.pred[s] = -1;
    heap_.push({0.0, s});
    while (!heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      if (ws_.done[top.idx] == ws_.epoch || top.d != ws_.dist[top.idx]) continue;
      ws_.done[top.idx] = ws_.epoch;
      ++settled_count_;
      const Vertex v = vertex(top.idx);
      if (box_.on_boundary(v) && earliest_boundary_ == kInf) earliest_boundary_ = top.d;
      if (on_settle(v, top.d)) return;
      relax(v, top.idx, top.d);
    }
  }

  LatticePath path_to(Vertex target) const {
    std::vector<Vertex> vs;
    for (std::int32_t i = static_cast<std::int32_t>(index(target)); i != -1; i = ws_.pred[i])
      vs.push_back(vertex(static_cast<std::uint32_t>(i)));
    std::reverse(vs.begin(), vs.end());
    return LatticePath(std::move(vs));
  }

 private:
  void relax(Vertex v, std::uint32_t i, double d) {
    for (auto k : order_) {
      Vertex n = v;
      EdgeKey e;
      switch (k) {
        case 0:
          if (v.x == box_.hi.x) continue;
          n.x += 1;
          e = {v.x, v.y, Orientation::horizontal};
          break;
        case 1:
          if (v.x == box_.lo.x) continue;
          n.x -= 1;
          e = {n.x, v.y, Orientation::horizontal};
          break;
        case 2:
          if (v.y == box_.hi.y) continue;
          n.y += 1;
          e = {v.x, v.y, Orientation::vertical};
          break;
        default:
          if (v.y == box_.lo.y) continue;
          n.y -= 1;
          e = {v.x, n.y, Orientation::vertical};
          break;
      }
      const auto j = index(n);
      if (ws_.done[j] == ws_.epoch) continue;
      const double nd = d + env_.weight(e);
      if (ws_.seen[j] != ws_.epoch || nd < ws_.dist[j]) {
        ws_.seen[j] = ws_.epoch;
        ws_.dist[j] = nd;
        ws_.pred[j] = static_cast<std::int32_t>(i);
        heap_.push({nd, j});
      } else if (nd == ws_.dist[j] && static_cast<std::int32_t>(i) < ws_.pred[j]) {
        ws_.pred[j] = static_cast<std::int32_t>(i);
      }
    }
  }

  const Environment& env_;
  SearchBox box_;
  std::int64_t w_;
  std::int64_t h_;
  NeighborOrder order_;
  Workspace& ws_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
  double earliest_boundary_ = kInf;
  std::int64_t settled_count_ = 0;
};

// Sums in the orientation starting at the (y, x)-smaller endpoint, so a path
// and its reversal get bit-identical times.
double canonical_time(const Environment& env, const LatticePath& p) {
  if (p.back() < p.front()) {
    double t = 0.0;
    for (std::size_t i = p.size() - 1; i > 0; --i) t += env.weight(p[i], p[i - 1]);
    return t;
  }
  return path_time(env, p);
}

bool touches_boundary(const SearchBox& box, const LatticePath& p) {
  for (auto v : p.vertices())
    if (box.on_boundary(v)) return true;
  return false;
}

}  // namespace

SearchBox SearchBox::around(std::span<const Vertex> points, std::int64_t margin) {
  if (points.empty()) throw std::invalid_argument("SearchBox::around: no points");
  std::int64_t x0 = points[0].x, x1 = x0, y0 = points[0].y, y1 = y0;
  for (auto p : points) {
    x0 = std::min<std::int64_t>(x0, p.x);
    x1 = std::max<std::int64_t>(x1, p.x);
    y0 = std::min<std::int64_t>(y0, p.y);
    y1 = std::max<std::int64_t>(y1, p.y);
  }
  static constexpr std::int64_t lim = std::numeric_limits<std::int32_t>::max();
  auto clampc = [](std::int64_t c) { return static_cast<std::int32_t>(std::clamp(c, -lim, lim)); };
  return {{clampc(x0 - margin), clampc(y0 - margin)}, {clampc(x1 + margin), clampc(y1 + margin)}};
}

SearchBox SearchBox::for_pair(Vertex u, Vertex v) {
  const Vertex pts[] = {u, v};
  return around(pts, std::max(2 * l1_distance(u, v), kMinMargin));
}

double path_time(const Environment& env, const LatticePath& p) {
  double t = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) t += env.weight(p[i - 1], p[i]);
  return t;
}

std::vector<GeodesicResult> geodesics_from(const Environment& env, Vertex u, std::span<const Vertex> targets,
                                           const SearchOptions& opts) {
  std::vector<Vertex> pts{u};
  std::int64_t far = 0;
  for (auto t : targets) {
    pts.push_back(t);
    far = std::max(far, l1_distance(u, t));
  }
  std::int64_t margin = opts.initial_margin > 0 ? opts.initial_margin : std::max(2 * far, kMinMargin);

  for (int growths = 0;; ++growths, margin *= 2) {
    const SearchBox box = SearchBox::around(pts, margin);
    BoxDijkstra search(env, box, opts.order);
    std::vector<char> pending(targets.size(), 1);
    std::size_t remaining = targets.size();
    double t_max = 0.0;
    if (remaining > 0) {
      search.run(u, [&](Vertex v, double d) {
        for (std::size_t k = 0; k < targets.size(); ++k)
          if (pending[k] && targets[k] == v) {
            pending[k] = 0;
            --remaining;
            t_max = std::max(t_max, d);
          }
        return remaining == 0;
      });
    }
    if (remaining > 0) continue;  // unreachable inside the box
    if (search.earliest_boundary() < t_max) continue;

    std::vector<GeodesicResult> out;
    out.reserve(targets.size());
    bool certified = true;
    for (auto t : targets) {
      GeodesicResult r;
      r.path = search.path_to(t);
      if (touches_boundary(box, r.path)) certified = false;
      r.time = canonical_time(env, r.path);
      r.settled = search.settled_count();
      r.box_growths = growths;
      out.push_back(std::move(r));
    }
    if (certified) return out;
  }
}

GeodesicResult geodesic(const Environment& env, Vertex u, Vertex v, const SearchOptions& opts) {
  if (u == v) return {0.0, LatticePath::trivial(u), 0, 0};
  const Vertex t[] = {v};
  return std::move(geodesics_from(env, u, t, opts).front());
}

double passage_time(const Environment& env, Vertex u, Vertex v, const SearchOptions& opts) {
  return geodesic(env, u, v, opts).time;
}

std::vector<Vertex> metric_ball(const Environment& env, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("metric_ball: t must be >= 0");
  const double scale = std::max(env.dist().mean(), 1e-3);
  const double guess = std::min(2.0 * t / scale, 1e6);
  std::int64_t margin = std::max<std::int64_t>(kMinMargin, static_cast<std::int64_t>(std::ceil(guess)));
  const Vertex origin[] = {{0, 0}};
  for (;; margin *= 2) {
    const SearchBox box = SearchBox::around(origin, margin);
    BoxDijkstra search(env, box, kDefaultNeighborOrder);
    std::vector<Vertex> ball;
    search.run({0, 0}, [&](Vertex v, double d) {
      if (d > t) return true;
      ball.push_back(v);
      return false;
    });
    if (search.earliest_boundary() <= t) continue;
    std::sort(ball.begin(), ball.end());
    return ball;
  }
}

std::size_t symmetric_difference(const LatticePath& p, const LatticePath& q) {
  auto a = p.edges();
  auto b = q.edges();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<EdgeKey> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.size();
}

LatticePath subpath_between(const LatticePath& p, Vertex a, Vertex b) {
  const auto ia = p.index_of(a);
  const auto ib = p.index_of(b);
  if (ia < 0 || ib < 0) throw std::invalid_argument("subpath_between: vertex not on path");
  auto vs = p.vertices();
  if (ia <= ib) return LatticePath(std::vector<Vertex>(vs.begin() + ia, vs.begin() + ib + 1));
  std::vector<Vertex> out(vs.begin() + ib, vs.begin() + ia + 1);
  std::reverse(out.begin(), out.end());
  return LatticePath(std::move(out));
}

}  // namespace fpp
