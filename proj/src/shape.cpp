#include "fpp/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

#include "fpp/environment.hpp"
#include "fpp/geodesic.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_trials(std::size_t trials) {
  if (trials < 2) throw std::invalid_argument("need at least 2 trials");
}

double dist_point(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double dist_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
  return dist_point(p, {a.x + t * dx, a.y + t * dy});
}

double dist_to_l1_sphere(Vec2 p) {
  static constexpr Vec2 c[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  double d = kInf;
  for (int k = 0; k < 4; ++k) d = std::min(d, dist_to_segment(p, c[k], c[(k + 1) % 4]));
  return d;
}

double dist_to_l1_ball(Vec2 p) { return std::abs(p.x) + std::abs(p.y) <= 1.0 ? 0.0 : dist_to_l1_sphere(p); }

// Dense sample of the unit l1 sphere.
std::vector<Vec2> l1_sphere_sample(int per_side) {
  static constexpr Vec2 c[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<Vec2> out;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < per_side; ++i) {
      const double s = static_cast<double>(i) / per_side;
      out.push_back({c[k].x + s * (c[(k + 1) % 4].x - c[k].x), c[k].y + s * (c[(k + 1) % 4].y - c[k].y)});
    }
  return out;
}

}  // namespace

Vertex scaled_floor(Vec2 dir, double n) {
  return {static_cast<std::int32_t>(std::floor(n * dir.x)), static_cast<std::int32_t>(std::floor(n * dir.y))};
}

DirectionProbe time_constant(const WeightDistribution& dist, Vec2 direction, std::int32_t n, std::size_t trials,
                             std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("time_constant: n must be >= 1");
  require_trials(trials);
  DirectionProbe out{direction, n, trials, scaled_floor(direction, n), {}, {}};
  auto samples = run_trials(trials, workers, [&](std::size_t i) {
    const Environment env(rng::derive_seed(seed, i), dist);
    return passage_time(env, {0, 0}, out.target) / n;
  });
  out.estimate = estimate(samples);
  out.samples = std::move(samples);
  return out;
}

std::vector<Vec2> ShapeEstimate::polygon() const {
  const auto nb = bins.size();
  std::vector<std::size_t> hit;
  for (std::size_t k = 0; k < nb; ++k)
    if (bins[k].hits > 0) hit.push_back(k);
  std::vector<Vec2> out;
  if (hit.empty()) return out;
  out.reserve(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    double r = bins[k].radius;
    if (bins[k].hits == 0) {
      // Circular neighbours among hit bins.
      auto it = std::lower_bound(hit.begin(), hit.end(), k);
      const std::size_t next = it == hit.end() ? hit.front() : *it;
      const std::size_t prev = it == hit.begin() ? hit.back() : *(it - 1);
      const double span = static_cast<double>((next + nb - prev) % nb == 0 ? nb : (next + nb - prev) % nb);
      const double along = static_cast<double>((k + nb - prev) % nb) / span;
      r = (1.0 - along) * bins[prev].radius + along * bins[next].radius;
    }
    out.push_back({r * std::cos(bins[k].theta), r * std::sin(bins[k].theta)});
  }
  return out;
}

ShapeEstimate shape_boundary(const WeightDistribution& dist, double t, std::size_t trials, std::uint64_t seed,
                             int workers, int bins) {
  if (!(t > 0.0)) throw std::invalid_argument("shape_boundary: t must be > 0");
  if (bins < 8) throw std::invalid_argument("shape_boundary: too few bins");
  require_trials(trials);
  const double width = 2.0 * std::numbers::pi / bins;
  ShapeEstimate out;
  out.t = t;
  for (std::size_t i = 0; i < trials; ++i) out.seeds.push_back(rng::derive_seed(seed, i));

  // Per trial: exit radius of the central ray of each bin from the fattened
  // ball, the union of unit squares centred on ball vertices. A ray point lies
  // in it iff its rounded coordinates form a ball vertex; the ray is sampled
  // every 1/8 lattice unit out to the farthest vertex.
  auto radii = run_trials(trials, workers, [&](std::size_t i) {
    const Environment env(out.seeds[i], dist);
    const auto ball = metric_ball(env, t);
    const std::unordered_set<Vertex, VertexHash> in(ball.begin(), ball.end());
    double reach = 0.0;
    for (auto v : ball) reach = std::max(reach, std::hypot(v.x, v.y));
    const auto steps = static_cast<long>(std::ceil((reach + 1.0) * 8.0));
    std::vector<double> r(static_cast<std::size_t>(bins), 0.0);
    for (int k = 0; k < bins; ++k) {
      const double c = std::cos(k * width), sn = std::sin(k * width);
      long last = 0;
      for (long j = 1; j <= steps; ++j) {
        const double d = j / 8.0;
        const Vertex v{static_cast<std::int32_t>(std::lround(d * c)), static_cast<std::int32_t>(std::lround(d * sn))};
        if (in.contains(v)) last = j;
      }
      r[static_cast<std::size_t>(k)] = last / 8.0 / t;
    }
    return r;
  });

  out.bins.resize(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k) {
    std::vector<double> vals;
    for (const auto& r : radii)
      if (r[static_cast<std::size_t>(k)] >= 0.0) vals.push_back(r[static_cast<std::size_t>(k)]);
    auto e = estimate(vals);
    out.bins[static_cast<std::size_t>(k)] = {k * width, e.mean, e.std_err, vals.size()};
  }
  for (int k = 1; k < bins; ++k) {
    const auto& a = out.bins[static_cast<std::size_t>(k)];
    const auto& b = out.bins[static_cast<std::size_t>(bins - k)];
    if (a.hits != trials || b.hits != trials) continue;
    const double gap = std::abs(a.radius - b.radius);
    const double se = std::hypot(a.std_err, b.std_err);
    out.reflection_gap = std::max(out.reflection_gap, gap);
    if (se > 0.0) out.reflection_gap_sigmas = std::max(out.reflection_gap_sigmas, gap / se);
  }
  return out;
}

double hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty set");
  auto directed = [](const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double worst = 0.0;
    for (auto p : from) {
      double best = kInf;
      for (auto q : to) best = std::min(best, dist_point(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double hausdorff_to_l1_diamond(const std::vector<Vertex>& ball, double t) {
  if (ball.empty() || !(t > 0.0)) throw std::invalid_argument("hausdorff_to_l1_diamond: empty ball or t <= 0");
  double worst = 0.0;
  std::unordered_set<Vertex, VertexHash> cells(ball.begin(), ball.end());
  for (auto v : ball) worst = std::max(worst, dist_to_l1_ball({v.x / t, v.y / t}));

  // Diamond side: grid sample at spacing 1 / (4t), nearest ball point by ring search.
  const int steps = static_cast<int>(std::ceil(4.0 * t));
  for (int i = -steps; i <= steps; ++i)
    for (int j = -steps; j <= steps; ++j) {
      const Vec2 p{static_cast<double>(i) / steps, static_cast<double>(j) / steps};
      if (std::abs(p.x) + std::abs(p.y) > 1.0) continue;
      const Vec2 s{p.x * t, p.y * t};
      const auto cx = static_cast<std::int32_t>(std::lround(s.x)), cy = static_cast<std::int32_t>(std::lround(s.y));
      double best = kInf;
      for (std::int32_t ring = 0; best == kInf || ring <= static_cast<std::int32_t>(std::ceil(best * t)) + 1; ++ring) {
        for (std::int32_t dx = -ring; dx <= ring; ++dx)
          for (std::int32_t dy = -ring; dy <= ring; ++dy) {
            if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
            const Vertex v{cx + dx, cy + dy};
            if (cells.contains(v)) best = std::min(best, dist_point(p, {v.x / t, v.y / t}));
          }
        if (ring > 4 * steps) break;
      }
      worst = std::max(worst, best);
    }
  return worst;
}

double hausdorff_to_l1_sphere(const std::vector<Vec2>& polygon) {
  if (polygon.empty()) throw std::invalid_argument("hausdorff_to_l1_sphere: empty polygon");
  double worst = 0.0;
  for (auto p : polygon) worst = std::max(worst, dist_to_l1_sphere(p));
  for (auto q : l1_sphere_sample(256)) {
    double best = kInf;
    for (auto p : polygon) best = std::min(best, dist_point(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

std::string to_string(FlatEdgeVerdict v) {
  switch (v) {
    case FlatEdgeVerdict::consistent_with_flat: return "consistent-with-flat";
    case FlatEdgeVerdict::strictly_convex: return "strictly-convex";
    case FlatEdgeVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

FlatEdgeResult flat_edge_test(const WeightDistribution& dist, Vec2 a, Vec2 b, std::int32_t n, std::size_t trials,
                              std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("flat_edge_test: n must be >= 1");
  require_trials(trials);
  FlatEdgeResult out{a, b, scaled_floor(a, n), scaled_floor(b, n), {}, {}, {}, {}, FlatEdgeVerdict::inconclusive, {}};
  if (out.lattice_a == out.lattice_b) throw std::invalid_argument("flat_edge_test: directions coincide at this n");
  const Vertex targets[] = {out.lattice_a, out.lattice_b, out.lattice_a + out.lattice_b};

  struct Row {
    double ta, tb, ts;
  };
  auto rows = run_trials(trials, workers, [&](std::size_t i) {
    const Environment env(rng::derive_seed(seed, i), dist);
    auto g = geodesics_from(env, {0, 0}, targets);
    return Row{g[0].time / n, g[1].time / n, g[2].time / n};
  });
  std::vector<double> ta, tb, ts, d;
  for (const auto& r : rows) {
    ta.push_back(r.ta);
    tb.push_back(r.tb);
    ts.push_back(r.ts);
    d.push_back(r.ta + r.tb - r.ts);
    out.samples.push_back({r.ta, r.tb, r.ts});
  }
  out.mu_a = estimate(ta);
  out.mu_b = estimate(tb);
  out.mu_sum = estimate(ts);
  out.delta = estimate(d);
  if (out.delta.mean > 3.0 * out.delta.std_err)
    out.verdict = FlatEdgeVerdict::strictly_convex;
  else if (std::abs(out.delta.mean) <= out.delta.std_err)
    out.verdict = FlatEdgeVerdict::consistent_with_flat;
  return out;
}

FlatEdgeResult flat_edge_test(const WeightDistribution& dist, double theta1, double theta2, double R1, double R2,
                              std::int32_t n, std::size_t trials, std::uint64_t seed, int workers) {
  return flat_edge_test(dist, {R1 * std::cos(theta1), R1 * std::sin(theta1)},
                        {R2 * std::cos(theta2), R2 * std::sin(theta2)}, n, trials, seed, workers);
}

LinfCheck linf_bound_check(const WeightDistribution& dist, Vec2 x, std::int32_t n, std::size_t trials,
                           std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("linf_bound_check: n must be >= 1");
  require_trials(trials);
  const double sup = std::max(std::abs(x.x), std::abs(x.y));
  const Vertex tx = scaled_floor(x, n);
  const Vertex taxis{static_cast<std::int32_t>(std::floor(n * sup)), 0};
  const Vertex targets[] = {tx, taxis};
  struct Row {
    double mx, ma;
  };
  auto rows = run_trials(trials, workers, [&](std::size_t i) {
    const Environment env(rng::derive_seed(seed, i), dist);
    auto g = geodesics_from(env, {0, 0}, targets);
    return Row{g[0].time / n, g[1].time / n};
  });
  std::vector<double> mx, ma, margin;
  for (const auto& r : rows) {
    mx.push_back(r.mx);
    ma.push_back(r.ma);
    margin.push_back(r.mx - r.ma);
  }
  LinfCheck out;
  for (const auto& r : rows) out.samples.push_back({r.mx, r.ma});
  out.mu_x = estimate(mx);
  out.mu_axis = estimate(ma);
  out.margin = estimate(margin);
  out.holds = out.margin.mean >= -3.0 * out.margin.std_err;
  return out;
}

StaircaseResult staircase_bound(const WeightDistribution& x_dist, double epsilon, double delta, std::size_t trials,
                                std::uint64_t seed, int workers) {
  if (x_dist.is_gaussian() || x_dist.support_lo() < 0.0 || x_dist.support_hi() > 1.0)
    throw std::invalid_argument("staircase_bound: X must be supported in [0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("staircase_bound: delta must lie in (0, 1)");
  const double inv = 1.0 / delta;
  if (std::abs(inv - std::round(inv)) > 1e-9) throw std::invalid_argument("staircase_bound: 1/delta must be an integer");
  if (!(epsilon > 0.0)) throw std::invalid_argument("staircase_bound: need epsilon > 0");
  require_trials(trials);

  StaircaseResult out;
  out.M = 1 + static_cast<std::int32_t>(std::lround(inv));
  out.lemma_regime = epsilon < delta;
  out.rhs = out.M * (1.0 + epsilon * x_dist.mean());
  auto mins = run_trials(trials, workers, [&](std::size_t i) {
    rng::CounterStream s(rng::derive_seed(seed, i));
    double s1 = 0.0, s2 = 0.0;
    for (int k = 0; k < out.M; ++k) s1 += x_dist.quantile(s.uniform());
    for (int k = 0; k < out.M; ++k) s2 += x_dist.quantile(s.uniform());
    return out.M + epsilon * std::min(s1, s2);
  });
  const auto e = estimate(mins);
  out.lhs = e.mean;
  out.gap = out.rhs - out.lhs;
  out.std_err = e.std_err;
  out.samples = std::move(mins);
  return out;
}

BerryResult berry_probe(const WeightDistribution& x_dist, std::int32_t M, std::size_t samples, std::uint64_t seed,
                        int workers) {
  if (M < 2) throw std::invalid_argument("berry_probe: M must be >= 2");
  if (samples < 1) throw std::invalid_argument("berry_probe: need samples");
  BerryResult out;
  out.M = M;
  out.threshold = M * x_dist.mean() - std::sqrt(static_cast<double>(M));
  constexpr std::size_t kBlock = kBerryBlock;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  auto counts = run_trials(blocks, workers, [&](std::size_t b) {
    rng::CounterStream s(rng::derive_seed(seed, b));
    const std::size_t end = std::min(samples, (b + 1) * kBlock);
    std::size_t hits = 0;
    for (std::size_t i = b * kBlock; i < end; ++i) {
      double sum = 0.0;
      for (int k = 0; k < M; ++k) sum += x_dist.quantile(s.uniform());
      hits += sum <= out.threshold ? 1 : 0;
    }
    return hits;
  });
  std::size_t hits = 0;
  for (auto c : counts) hits += c;
  out.estimate = proportion(hits, samples);
  out.block_hits = std::move(counts);
  return out;
}

std::vector<double> sides_schedule(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("sides_schedule: epsilon must lie in (0, 1)");
  const double l = std::log(1.0 / epsilon);
  std::vector<double> out;
  if (l <= 1.0) return out;
  const auto k = static_cast<int>(std::floor(l / (7.0 * std::log(l))));
  for (int i = 1; i <= k; ++i) out.push_back(epsilon * std::pow(l, 3.0 * i));
  return out;
}

SidesWitness sides_witness(double epsilon, const std::vector<std::pair<double, double>>& probes, std::int32_t n,
                           std::size_t trials, std::uint64_t seed, int workers, const WeightDistribution& x_dist) {
  if (x_dist.is_constant()) throw std::invalid_argument("sides_witness: X must be non-degenerate");
  const auto G = WeightDistribution::scaled_shifted(x_dist, epsilon);
  SidesWitness out;
  out.header =
      "qualitative evidence only: strictly-convex verdicts between (1,d1) and (1,d2) at finite n; "
      "this does not certify a lower bound on the number of sides of the limit shape";
  out.epsilon = epsilon;
  out.probes = probes;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto [d1, d2] = probes[i];
    if (!(epsilon < d1 && d1 < d2 && d2 < 1.0))
      throw std::invalid_argument("sides_witness: probes need epsilon < d1 < d2 < 1");
    if (d1 * std::pow(std::log(1.0 / d1), 3.0) > d2)
      throw std::invalid_argument("sides_witness: probe violates d1 log^3(1/d1) <= d2");
    auto r = flat_edge_test(G, Vec2{1.0, d1}, Vec2{1.0, d2}, n, trials, rng::derive_seed(seed, i), workers);
    if (r.verdict == FlatEdgeVerdict::strictly_convex) ++out.strictly_convex;
    out.results.push_back(std::move(r));
  }
  return out;
}

}  // namespace fpp
