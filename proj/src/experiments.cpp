#include "fpp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

#include "fpp/geodesic.hpp"
#include "fpp/geometry.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr double kZ = 1.959963984540054;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vtx(Vertex v) { return std::to_string(v.x) + "," + std::to_string(v.y); }

void echo_run(ExperimentReport& r, const RunConfig& cfg) {
  r.config.emplace_back("dist", cfg.dist.spec());
  r.config.emplace_back("seed", std::to_string(cfg.seed));
  r.config.emplace_back("trials", std::to_string(cfg.trials));
  r.config.emplace_back("workers", std::to_string(cfg.workers > 0 ? cfg.workers : default_workers()));
}

Statistic mean_stat(std::string name, std::span<const double> values) {
  const auto e = estimate(values);
  return {std::move(name), e.mean, e.std_err, {e.mean - kZ * e.std_err, e.mean + kZ * e.std_err}, e.n};
}

Statistic prop_stat(std::string name, std::size_t hits, std::size_t n) {
  const auto p = proportion(hits, n);
  return {std::move(name), p.p, p.std_err, p.wilson, n};
}

Statistic scalar_stat(std::string name, double v) { return {std::move(name), v, 0.0, {v, v}, 1}; }

void require_trials(std::size_t trials, std::size_t min = 1) {
  if (trials < min) throw std::invalid_argument("need at least " + std::to_string(min) + " trials");
}

void require_atomless(const WeightDistribution& d, const char* what) {
  if (!d.atomless())
    throw std::invalid_argument(std::string(what) + ": geodesics are not unique under a Constant law");
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

bool ExperimentReport::passed() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed; });
}

const Statistic& ExperimentReport::aggregate(const std::string& name) const {
  for (const auto& s : aggregates)
    if (s.name == name) return s;
  throw std::out_of_range("no aggregate named " + name);
}

// ---------------------------------------------------------------- coalescence

std::int32_t coalescence_ell(Vertex y, double epsilon) {
  const double norm = static_cast<double>(std::abs(std::int64_t{y.x}) + std::abs(std::int64_t{y.y}));
  if (norm == 0.0) return 0;
  return static_cast<std::int32_t>(std::floor(std::pow(norm, 0.125 - epsilon)));
}

ExperimentReport coalescence_experiment(const RunConfig& cfg, const CoalescenceParams& p) {
  if (p.y == Vertex{0, 0}) throw std::invalid_argument("coalescence: y must be nonzero");
  if (!(p.epsilon > 0.0 && p.epsilon <= 1.0 / 17.0)) throw std::invalid_argument("coalescence: epsilon in (0, 1/17]");
  if (!(p.delta >= 0.0)) throw std::invalid_argument("coalescence: delta must be >= 0");
  if (p.random_pairs < 0) throw std::invalid_argument("coalescence: random_pairs must be >= 0");
  require_atomless(cfg.dist, "coalescence");
  require_trials(cfg.trials);
  Stopwatch clock;

  ExperimentReport rep;
  rep.kind = "coalesce";
  echo_run(rep, cfg);
  rep.config.emplace_back("y", vtx(p.y));
  rep.config.emplace_back("epsilon", num(p.epsilon));
  rep.config.emplace_back("delta", num(p.delta));
  rep.config.emplace_back("random_pairs", std::to_string(p.random_pairs));

  const std::int32_t ell = coalescence_ell(p.y, p.epsilon);
  const double norm = static_cast<double>(std::abs(std::int64_t{p.y.x}) + std::abs(std::int64_t{p.y.y}));
  const double threshold = 0.5 * std::pow(norm, 1.0 - p.delta);

  struct Quad {
    Vertex u, v, z, w;
  };
  struct Row {
    double max_sd;
    std::int64_t settled;
  };
  auto rows = run_trials(cfg.trials, cfg.workers, [&](std::size_t i) {
    const auto env_seed = rng::derive_seed(cfg.seed, i);
    const Environment env(env_seed, cfg.dist);
    std::vector<Quad> quads;
    const Vertex c[4] = {{-ell, -ell}, {ell, -ell}, {ell, ell}, {-ell, ell}};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) quads.push_back({c[a], p.y + c[b], c[a + 2], p.y + c[b + 2]});
    rng::CounterStream s(rng::derive_seed(env_seed, 1));
    auto pick = [&](Vertex centre) {
      const auto side = 2 * ell + 1;
      auto coord = [&] { return static_cast<std::int32_t>(std::floor(s.uniform() * side)) - ell; };
      const auto dx = coord();
      const auto dy = coord();
      return centre + Vertex{dx, dy};
    };
    for (int k = 0; k < p.random_pairs; ++k) {
      Quad q;
      q.u = pick({0, 0});
      q.v = pick(p.y);
      q.z = pick({0, 0});
      q.w = pick(p.y);
      quads.push_back(q);
    }

    // One shortest-path tree per distinct source.
    std::map<Vertex, std::set<Vertex>> wanted;
    for (const auto& q : quads) {
      wanted[q.u].insert(q.v);
      wanted[q.z].insert(q.w);
    }
    std::map<std::pair<Vertex, Vertex>, LatticePath> paths;
    std::int64_t settled = 0;
    for (const auto& [src, dsts] : wanted) {
      const std::vector<Vertex> targets(dsts.begin(), dsts.end());
      auto res = geodesics_from(env, src, targets);
      for (std::size_t k = 0; k < targets.size(); ++k) paths.emplace(std::pair{src, targets[k]}, res[k].path);
      if (!res.empty()) settled += res.front().settled;
    }
    std::size_t best = 0;
    for (const auto& q : quads)
      best = std::max(best, symmetric_difference(paths.at({q.u, q.v}), paths.at({q.z, q.w})));
    return Row{static_cast<double>(best), settled};
  });

  rep.columns = {"trial", "max_symdiff", "exceeded"};
  std::size_t hits = 0;
  std::vector<double> sds;
  double settled = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool ex = rows[i].max_sd > threshold;
    hits += ex ? 1 : 0;
    sds.push_back(rows[i].max_sd);
    settled += static_cast<double>(rows[i].settled);
    rep.rows.push_back({static_cast<double>(i), rows[i].max_sd, ex ? 1.0 : 0.0});
  }
  rep.aggregates.push_back(prop_stat("exceedance", hits, rows.size()));
  rep.aggregates.push_back(mean_stat("max_symdiff", sds));
  rep.aggregates.push_back(scalar_stat("threshold", threshold));
  rep.aggregates.push_back(scalar_stat("ell", ell));
  rep.counters.emplace_back("vertices_settled", settled);
  rep.notes.push_back("sampled-sup: the max runs over 4 corner-extremal and " + std::to_string(p.random_pairs) +
                      " random endpoint quadruples per trial, a lower bound on the supremum");
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ------------------------------------------------------------------- midpoint

std::int64_t midpoint_distance(Vertex u, Vertex v, Vertex z) {
  return std::min(l1_distance(u, z), l1_distance(v, z));
}

ExperimentReport midpoint_experiment(const RunConfig& cfg, const MidpointParams& p) {
  if (p.u == p.v) throw std::invalid_argument("midpoint: u and v must differ");
  if (p.ell < 0) throw std::invalid_argument("midpoint: ell must be >= 0");
  require_trials(cfg.trials);
  Stopwatch clock;

  ExperimentReport rep;
  rep.kind = "midpoint";
  echo_run(rep, cfg);
  rep.config.emplace_back("u", vtx(p.u));
  rep.config.emplace_back("v", vtx(p.v));
  rep.config.emplace_back("z", vtx(p.z));
  rep.config.emplace_back("ell", std::to_string(p.ell));

  struct Row {
    double direct, averaged;
  };
  auto rows = run_trials(cfg.trials, cfg.workers, [&](std::size_t i) {
    const Environment env(rng::derive_seed(cfg.seed, i), cfg.dist);
    Row r{0.0, 0.0};
    double hits = 0.0, count = 0.0;
    for (std::int32_t dy = -p.ell; dy <= p.ell; ++dy)
      for (std::int32_t dx = -p.ell; dx <= p.ell; ++dx) {
        const Vertex w{dx, dy};
        const bool on = geodesic(env, p.u + w, p.v + w).path.index_of(p.z + w) >= 0;
        if (w == Vertex{0, 0}) r.direct = on ? 1.0 : 0.0;
        hits += on ? 1.0 : 0.0;
        count += 1.0;
      }
    r.averaged = hits / count;
    return r;
  });

  rep.columns = {"trial", "direct", "averaged"};
  std::size_t direct_hits = 0;
  std::vector<double> averaged;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    direct_hits += rows[i].direct > 0.0 ? 1 : 0;
    averaged.push_back(rows[i].averaged);
    rep.rows.push_back({static_cast<double>(i), rows[i].direct, rows[i].averaged});
  }
  rep.aggregates.push_back(prop_stat("direct", direct_hits, rows.size()));
  rep.aggregates.push_back(mean_stat("averaged", averaged));
  rep.aggregates.push_back(scalar_stat("D", static_cast<double>(midpoint_distance(p.u, p.v, p.z))));
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ------------------------------------------------------------ attractiveness

std::vector<IntervalJ> partition_intervals(std::int32_t L, std::int32_t N, std::int32_t m) {
  if (L < 1 || N < 1 || m < 1) throw std::invalid_argument("partition: L, N, m must be positive");
  std::vector<IntervalJ> out;
  for (std::int32_t i = 0; i < N; ++i) {
    const auto a = static_cast<std::int32_t>(std::int64_t{i} * L / N);
    const auto b = static_cast<std::int32_t>(std::int64_t{i + 1} * L / N);
    if (b - a < m || b - a > 2 * m)
      throw std::invalid_argument("partition: interval lengths must lie in [m, 2m]");
    out.emplace_back(a, b);
  }
  return out;
}

ExperimentReport attractiveness_diagnostic(const RunConfig& cfg, const AttractivenessParams& p) {
  require_atomless(cfg.dist, "attractiveness");
  if (p.r < 1) throw std::invalid_argument("attractiveness: r must be >= 1");
  if (!(p.xi >= 0.0 && p.xi <= 1.0)) throw std::invalid_argument("attractiveness: xi in [0, 1]");
  if (!(p.rho > 0.0) || !(p.rho2 > 0.0)) throw std::invalid_argument("attractiveness: rho, rho2 must be positive");
  const auto intervals = partition_intervals(p.L, p.N, p.m);
  require_trials(cfg.trials);
  Stopwatch clock;

  AttractParams ap;
  ap.r = p.r;
  ap.rho1 = p.rho1 > 0.0 ? p.rho1 : 4.0 * cfg.dist.mean();
  ap.rho2 = p.rho2;
  ap.L = p.L;
  ap.mode = p.mode;

  ExperimentReport rep;
  rep.kind = "attract";
  echo_run(rep, cfg);
  rep.config.emplace_back("L", std::to_string(p.L));
  rep.config.emplace_back("s", std::to_string(p.s));
  rep.config.emplace_back("m", std::to_string(p.m));
  rep.config.emplace_back("N", std::to_string(p.N));
  rep.config.emplace_back("r", std::to_string(p.r));
  rep.config.emplace_back("xi", num(p.xi));
  rep.config.emplace_back("rho", num(p.rho));
  rep.config.emplace_back("rho1", num(ap.rho1));
  rep.config.emplace_back("rho2", num(p.rho2));
  rep.config.emplace_back("mode", p.mode == HopBoundMode::enforced ? "enforced" : "relaxed");

  // Loose shape constraints, warn only: the constant alpha_rho is unknown.
  const double lsq = log_sq(p.L);
  if (p.r > p.N / std::max(lsq, 1.0)) rep.notes.push_back("warning: r exceeds N / log^2 L");
  if (std::max<double>(p.r, lsq) > std::sqrt(static_cast<double>(p.m) / p.r))
    rep.notes.push_back("warning: max(r, log^2 L) exceeds sqrt(m / r)");

  struct Row {
    double fraction;
    bool indicator, slope_ok;
    std::int64_t labels;
    std::int64_t hop_violations;
  };
  auto rows = run_trials(cfg.trials, cfg.workers, [&](std::size_t i) {
    const Environment env(rng::derive_seed(cfg.seed, i), cfg.dist);
    const auto gamma = geodesic(env, {0, 0}, {p.L, p.s}).path;
    const auto prof = pioneer_profile(gamma);
    Row r{0.0, false, has_bounded_slope(prof, p.rho, p.m), 0, 0};
    std::size_t attractive = 0;
    for (const auto& J : intervals) {
      const auto q = RestrictedQuery::from_path(gamma, J, ap.r, ap.rho2, ap.L, ap.mode);
      const auto res = restricted_passage_time(env, q);
      r.labels += res.labels_expanded;
      if (res.feasible() && !res.hop_bound_ok) ++r.hop_violations;
      const double pioneer = pioneer_passage_time(env, prof, J);
      if (res.time > pioneer + 2.0 * ap.rho1 * std::max<double>(ap.r, lsq)) ++attractive;
    }
    r.fraction = static_cast<double>(attractive) / static_cast<double>(intervals.size());
    r.indicator = r.fraction > p.xi;
    return r;
  });

  rep.columns = {"trial", "attractive_fraction", "indicator", "bounded_slope", "labels_expanded", "hop_violations"};
  std::vector<double> fr;
  std::size_t ind = 0, slope = 0;
  double labels = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    fr.push_back(r.fraction);
    ind += r.indicator ? 1 : 0;
    slope += r.slope_ok ? 1 : 0;
    labels += static_cast<double>(r.labels);
    rep.rows.push_back({static_cast<double>(i), r.fraction, r.indicator ? 1.0 : 0.0, r.slope_ok ? 1.0 : 0.0,
                        static_cast<double>(r.labels), static_cast<double>(r.hop_violations)});
  }
  rep.aggregates.push_back(mean_stat("attractive_fraction", fr));
  rep.aggregates.push_back(prop_stat("indicator", ind, rows.size()));
  rep.aggregates.push_back(prop_stat("bounded_slope", slope, rows.size()));
  rep.counters.emplace_back("labels_expanded", labels);
  rep.notes.push_back("attractiveness is certified by the sufficient event restricted > pioneer + 2 rho1 max(r, log^2 L)");
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ------------------------------------------------------------ wrong direction

double wrong_direction_radius(const LatticePath& gamma, double theta_u) {
  double best = 0.0;
  for (auto v : gamma.vertices()) {
    if (v.x == 0 && v.y == 0) continue;
    const double arg = std::atan2(static_cast<double>(v.y), static_cast<double>(v.x));
    if (std::abs(arg) >= theta_u) best = std::max(best, std::hypot(v.x, v.y));
  }
  return best;
}

ExperimentReport wrong_direction_probe(const RunConfig& cfg, const WrongDirectionParams& p) {
  require_atomless(cfg.dist, "wrong-direction probe");
  if (!(p.theta_u > std::numbers::pi / 4 && p.theta_u < std::numbers::pi / 2))
    throw std::invalid_argument("wrong-direction probe: theta_u in (pi/4, pi/2)");
  if (!(p.theta0 >= 0.0 && p.theta0 <= std::numbers::pi / 4))
    throw std::invalid_argument("wrong-direction probe: theta0 in [0, pi/4]");
  if (p.n < 1) throw std::invalid_argument("wrong-direction probe: n must be >= 1");
  if (p.thresholds.empty()) throw std::invalid_argument("wrong-direction probe: need a threshold");
  require_trials(cfg.trials);
  Stopwatch clock;

  ExperimentReport rep;
  rep.kind = "probe-wrong";
  echo_run(rep, cfg);
  rep.config.emplace_back("n", std::to_string(p.n));
  rep.config.emplace_back("theta_u", num(p.theta_u));
  rep.config.emplace_back("theta0", num(p.theta0));
  std::string th;
  for (auto t : p.thresholds) th += (th.empty() ? "" : ",") + num(t);
  rep.config.emplace_back("thresholds", th);

  const Vertex target{static_cast<std::int32_t>(std::floor(p.n * std::cos(p.theta0))),
                      static_cast<std::int32_t>(std::floor(p.n * std::sin(p.theta0)))};
  auto radii = run_trials(cfg.trials, cfg.workers, [&](std::size_t i) {
    const Environment env(rng::derive_seed(cfg.seed, i), cfg.dist);
    return wrong_direction_radius(geodesic(env, {0, 0}, target).path, p.theta_u);
  });

  rep.columns = {"trial", "max_radius"};
  for (std::size_t k = 0; k < p.thresholds.size(); ++k) rep.columns.push_back("exceeds_" + std::to_string(k));
  std::vector<std::size_t> hits(p.thresholds.size(), 0);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    std::vector<double> row{static_cast<double>(i), radii[i]};
    for (std::size_t k = 0; k < p.thresholds.size(); ++k) {
      const bool ex = radii[i] >= p.thresholds[k];
      hits[k] += ex ? 1 : 0;
      row.push_back(ex ? 1.0 : 0.0);
    }
    rep.rows.push_back(std::move(row));
  }
  rep.aggregates.push_back(mean_stat("max_radius", radii));
  for (std::size_t k = 0; k < p.thresholds.size(); ++k)
    rep.aggregates.push_back(prop_stat("exceedance_" + std::to_string(k), hits[k], radii.size()));
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ----------------------------------------------------------------- tail fit

ExperimentReport tail_fit(const RunConfig& cfg, const TailParams& p) {
  if (p.distances.empty()) throw std::invalid_argument("tail_fit: need distances");
  for (auto d : p.distances)
    if (d < 1) throw std::invalid_argument("tail_fit: distances must be >= 1");
  if (!(p.exceedance > 0.0 && p.exceedance < 1.0)) throw std::invalid_argument("tail_fit: exceedance in (0, 1)");
  require_trials(cfg.trials, 2);
  Stopwatch clock;

  ExperimentReport rep;
  rep.kind = "tails";
  echo_run(rep, cfg);
  std::string ds;
  for (auto d : p.distances) ds += (ds.empty() ? "" : ",") + std::to_string(d);
  rep.config.emplace_back("distances", ds);
  rep.config.emplace_back("exceedance", num(p.exceedance));

  struct Sample {
    double time, length;
  };
  std::vector<Vertex> targets;
  for (auto d : p.distances) targets.push_back({d, 0});
  auto samples = run_trials(cfg.trials, cfg.workers, [&](std::size_t i) {
    const Environment env(rng::derive_seed(cfg.seed, i), cfg.dist);
    std::vector<Sample> out;
    for (const auto& g : geodesics_from(env, {0, 0}, targets))
      out.push_back({g.time, static_cast<double>(g.path.length())});
    return out;
  });

  // Smallest x with empirical P(value >= x) < level: just above the
  // ceil(level n)-th largest value.
  auto suggest = [&](std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    const auto k = static_cast<std::size_t>(std::ceil(p.exceedance * static_cast<double>(v.size()))) - 1;
    return std::nextafter(v[std::min(k, v.size() - 1)], std::numeric_limits<double>::infinity());
  };

  rep.columns = {"trial", "distance", "time_ratio", "length_ratio", "centered"};
  double rho1 = 0.0, rho2 = 0.0;
  std::vector<double> stdevs;
  for (std::size_t k = 0; k < p.distances.size(); ++k) {
    const double d = p.distances[k];
    std::vector<double> t, tr, lr;
    for (const auto& s : samples) {
      t.push_back(s[k].time);
      tr.push_back(s[k].time / d);
      lr.push_back(s[k].length / d);
    }
    const auto et = estimate(t);
    stdevs.push_back(et.stdev);
    std::vector<double> cent;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      cent.push_back(std::abs(t[i] - et.mean) / std::sqrt(d));
      rep.rows.push_back({static_cast<double>(i), d, tr[i], lr[i], cent.back()});
    }
    const std::string tag = "_" + std::to_string(p.distances[k]);
    rep.aggregates.push_back(mean_stat("time" + tag, t));
    rep.aggregates.push_back(scalar_stat("stdev" + tag, et.stdev));
    rep.aggregates.push_back(mean_stat("time_ratio" + tag, tr));
    rep.aggregates.push_back(mean_stat("length_ratio" + tag, lr));
    rep.aggregates.push_back(mean_stat("centered" + tag, cent));
    const double s1 = suggest(tr), s2 = suggest(lr);
    rep.aggregates.push_back(scalar_stat("rho1_suggested" + tag, s1));
    rep.aggregates.push_back(scalar_stat("rho2_suggested" + tag, s2));
    rho1 = std::max(rho1, s1);
    rho2 = std::max(rho2, s2);

    // Log-linear fit of the upper tail of the centred deviation.
    std::sort(cent.begin(), cent.end());
    std::vector<double> xs, ys;
    const auto n = cent.size();
    for (std::size_t j = n / 2; j < n; j += std::max<std::size_t>(1, n / 64)) {
      xs.push_back(cent[j]);
      ys.push_back(std::log(static_cast<double>(n - j) / static_cast<double>(n)));
    }
    if (xs.size() >= 2 && xs.back() > xs.front())
      rep.aggregates.push_back(scalar_stat("tail_slope" + tag, ols_slope(xs, ys)));
  }
  rep.aggregates.push_back(scalar_stat("rho1_suggested", rho1));
  rep.aggregates.push_back(scalar_stat("rho2_suggested", rho2));
  if (stdevs.size() >= 2 && stdevs.front() > 0.0)
    rep.aggregates.push_back(scalar_stat("stdev_ratio", stdevs.back() / stdevs.front()));
  rep.notes.push_back("suggested rho values are the smallest ratios with empirical exceedance below the level");
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ------------------------------------------------------------ Mermin-Wagner

namespace {

double gaussian_box_prob(std::span<const Interval> box, std::span<const double> shift) {
  double p = 1.0;
  for (std::size_t k = 0; k < box.size(); ++k) {
    const double lo = box[k].lo - shift[k], hi = box[k].hi - shift[k];
    // Difference of upper tails above the median, lower tails below.
    p *= lo >= 0.0 ? normal_cdf(-lo) - normal_cdf(-hi) : normal_cdf(hi) - normal_cdf(lo);
  }
  return p;
}

struct Triple {
  bool a, plus, minus;
};

MwGeneralResult summarise(const std::vector<Triple>& t, double tau_sq, std::uint64_t seed, std::size_t bootstrap) {
  MwGeneralResult r;
  r.trials = t.size();
  r.factor = std::exp(-0.5 * tau_sq);
  auto margin_of = [&](std::size_t a, std::size_t p, std::size_t m, std::size_t n) {
    const double dn = static_cast<double>(n);
    return std::sqrt((p / dn) * (m / dn)) - r.factor * (a / dn);
  };
  std::size_t a = 0, p = 0, m = 0;
  for (const auto& x : t) {
    a += x.a;
    p += x.plus;
    m += x.minus;
  }
  r.p_a = proportion(a, t.size());
  r.p_plus = proportion(p, t.size());
  r.p_minus = proportion(m, t.size());
  r.margin = margin_of(a, p, m, t.size());

  // Nonparametric bootstrap over trials. Resampling the 8 outcome classes
  // keeps each replicate O(n) without materialising indices.
  std::vector<double> reps;
  reps.reserve(bootstrap);
  rng::CounterStream s(rng::derive_seed(seed, 0xb007));
  const auto n = t.size();
  for (std::size_t b = 0; b < bootstrap; ++b) {
    std::size_t ba = 0, bp = 0, bm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = t[static_cast<std::size_t>(s.uniform() * static_cast<double>(n))];
      ba += x.a;
      bp += x.plus;
      bm += x.minus;
    }
    reps.push_back(margin_of(ba, bp, bm, n));
  }
  r.std_err = bootstrap >= 2 ? estimate(reps).stdev : 0.0;
  r.holds = r.margin >= -3.0 * r.std_err;
  r.outcomes.reserve(n);
  for (const auto& x : t) r.outcomes.push_back({x.a, x.plus, x.minus});
  return r;
}

}  // namespace

MwGaussianResult mw_check_gaussian(std::span<const double> tau, std::span<const Interval> box) {
  if (tau.size() != box.size()) throw std::invalid_argument("mw_check_gaussian: tau and box dimensions differ");
  if (tau.empty() || tau.size() > 4) throw std::invalid_argument("mw_check_gaussian: dimension must be 1 to 4");
  for (const auto& b : box)
    if (!(b.lo <= b.hi)) throw std::invalid_argument("mw_check_gaussian: box bounds out of order");
  std::vector<double> zero(tau.size(), 0.0), neg(tau.size());
  double tau_sq = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    neg[k] = -tau[k];
    tau_sq += tau[k] * tau[k];
  }
  MwGaussianResult r;
  r.p_a = gaussian_box_prob(box, zero);
  r.p_plus = gaussian_box_prob(box, neg);  // X in A + tau  <=>  X - tau in A
  r.p_minus = gaussian_box_prob(box, tau);
  r.lhs = std::sqrt(r.p_plus * r.p_minus);
  r.rhs = std::exp(-0.5 * tau_sq) * r.p_a;
  r.holds = r.lhs >= r.rhs - 1e-9;
  return r;
}

MwGeneralResult mw_check_general(const WeightDistribution& dist, std::span<const double> tau,
                                 const std::function<bool(std::span<const double>)>& event, std::size_t trials,
                                 std::uint64_t seed, int workers, std::size_t bootstrap) {
  require_trials(trials, kMwMinTrials);
  const GaussianCoupling c(dist);
  double tau_sq = 0.0;
  for (auto t : tau) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("mw_check_general: tau entries in [0, 1]");
    tau_sq += t * t;
  }
  auto triples = run_trials(trials, workers, [&](std::size_t i) {
    rng::CounterStream s(rng::derive_seed(seed, i));
    std::vector<double> w(tau.size()), lo(tau.size()), hi(tau.size());
    for (std::size_t k = 0; k < tau.size(); ++k) {
      w[k] = dist.quantile(s.uniform());
      lo[k] = perturb(c, w[k], tau[k], Direction::down);
      hi[k] = perturb(c, w[k], tau[k], Direction::up);
    }
    // w in T+(A) iff g-(w) in A; w in T-(A) iff g+(w) in A.
    return Triple{event(w), event(lo), event(hi)};
  });
  return summarise(triples, tau_sq, seed, bootstrap);
}

MwGeneralResult mw_check_environment(const WeightDistribution& dist, const ShiftMap& tau,
                                     const std::function<bool(const Environment&)>& event, std::size_t trials,
                                     std::uint64_t seed, int workers, std::size_t bootstrap) {
  require_trials(trials, kMwMinTrials);
  double tau_sq = 0.0;
  for (const auto& [e, t] : tau) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("mw_check_environment: tau entries in [0, 1]");
    tau_sq += t * t;
  }
  auto triples = run_trials(trials, workers, [&](std::size_t i) {
    const Environment env(rng::derive_seed(seed, i), dist);
    return Triple{event(env), event(perturb_environment(env, tau, Direction::down)),
                  event(perturb_environment(env, tau, Direction::up))};
  });
  return summarise(triples, tau_sq, seed, bootstrap);
}

ShiftMap uniform_shift(const SearchBox& box, double sigma) {
  ShiftMap out;
  for (auto y = box.lo.y; y <= box.hi.y; ++y)
    for (auto x = box.lo.x; x <= box.hi.x; ++x) {
      if (x < box.hi.x) out.emplace(EdgeKey{x, y, Orientation::horizontal}, sigma);
      if (y < box.hi.y) out.emplace(EdgeKey{x, y, Orientation::vertical}, sigma);
    }
  return out;
}

ExperimentReport to_report(const MwGaussianResult& r) {
  ExperimentReport rep;
  rep.kind = "mw-gaussian";
  rep.aggregates = {scalar_stat("p_a", r.p_a),   scalar_stat("p_plus", r.p_plus), scalar_stat("p_minus", r.p_minus),
                    scalar_stat("lhs", r.lhs),   scalar_stat("rhs", r.rhs)};
  rep.gates.push_back({"lhs >= rhs", r.holds, "slack " + num(r.lhs - r.rhs)});
  return rep;
}

ExperimentReport to_report(const MwGeneralResult& r) {
  ExperimentReport rep;
  rep.kind = "mw-general";
  auto p = [](std::string name, const Proportion& x) { return Statistic{std::move(name), x.p, x.std_err, x.wilson, x.n}; };
  rep.aggregates = {p("p_a", r.p_a), p("p_plus", r.p_plus), p("p_minus", r.p_minus), scalar_stat("factor", r.factor),
                    Statistic{"margin", r.margin, r.std_err,
                              {r.margin - kZ * r.std_err, r.margin + kZ * r.std_err}, r.trials}};
  rep.gates.push_back({"margin >= -3 bootstrap se", r.holds, "margin " + num(r.margin) + " se " + num(r.std_err)});
  rep.columns = {"trial", "event", "event_plus", "event_minus"};
  for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
    const auto& o = r.outcomes[i];
    rep.rows.push_back({static_cast<double>(i), o[0] ? 1.0 : 0.0, o[1] ? 1.0 : 0.0, o[2] ? 1.0 : 0.0});
  }
  return rep;
}

}  // namespace fpp
