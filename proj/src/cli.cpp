#include "fpp/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "fpp/experiments.hpp"
#include "fpp/geodesic.hpp"
#include "fpp/io.hpp"
#include "fpp/parallel.hpp"
#include "fpp/restricted.hpp"
#include "fpp/shape.hpp"

namespace fpp::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Vertex parse_vertex(const std::string& s) {
  std::istringstream in(s);
  Vertex v;
  char comma = 0;
  if (!(in >> v.x >> comma >> v.y) || comma != ',' || !(in >> std::ws).eof())
    throw UsageError("expected a vertex X,Y, got '" + s + "'");
  return v;
}

Vec2 parse_vec(const std::string& s) {
  std::istringstream in(s);
  Vec2 v;
  char comma = 0;
  if (!(in >> v.x >> comma >> v.y) || comma != ',' || !(in >> std::ws).eof())
    throw UsageError("expected a vector X,Y, got '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw UsageError("expected a number, got '" + s + "'");
  return v;
}

// "lo,hi:lo,hi"; bounds accept inf and -inf.
std::vector<Interval> parse_box(const std::string& s) {
  std::vector<Interval> out;
  for (const auto& part : split(s, ':')) {
    const auto b = split(part, ',');
    if (b.size() != 2) throw UsageError("box coordinates are LO,HI separated by ':'");
    out.push_back({parse_real(b[0]), parse_real(b[1])});
  }
  return out;
}

// "d1:d2,d1:d2"
std::vector<std::pair<double, double>> parse_pairs(const std::string& s) {
  std::vector<std::pair<double, double>> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) {
    const auto b = split(part, ':');
    if (b.size() != 2) throw UsageError("probe pairs are D1:D2 separated by ','");
    out.emplace_back(parse_real(b[0]), parse_real(b[1]));
  }
  return out;
}

// Collects outputs in memory and commits them at the end. A new output
// directory is populated under a temporary name and renamed into place;
// existing files are only replaced with --force.
class Outputs {
 public:
  Outputs(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
  fs::path path_of(const std::string& name) const { return dir_ / name; }

  void commit() {
    if (files_.empty()) return;
    if (!fs::exists(dir_)) {
      auto tmp = dir_;
      tmp += ".tmp-" + std::to_string(std::hash<std::string>{}(dir_.string()) % 100000);
      fs::remove_all(tmp);
      fs::create_directories(tmp);
      for (const auto& [name, content] : files_) write(tmp / name, content);
      if (dir_.has_parent_path()) fs::create_directories(dir_.parent_path());
      fs::rename(tmp, dir_);
      return;
    }
    if (!fs::is_directory(dir_)) throw UsageError("output path exists and is not a directory: " + dir_.string());
    if (!force_)
      for (const auto& [name, content] : files_)
        if (fs::exists(dir_ / name))
          throw UsageError("refusing to overwrite " + (dir_ / name).string() + " (use --force)");
    for (const auto& [name, content] : files_) {
      auto tmp = dir_ / (name + ".tmp");
      write(tmp, content);
      fs::rename(tmp, dir_ / name);
    }
  }

 private:
  static void write(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + p.string());
  }

  fs::path dir_;
  bool force_;
  std::vector<std::pair<std::string, std::string>> files_;
};

struct Common {
  std::string dist = "unif:1:2";
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  int workers = 0;
  std::string out = "fpp-out";
  bool force = false;
};

RunConfig run_config(const Common& c) {
  RunConfig r;
  r.dist = WeightDistribution::parse(c.dist);
  r.seed = c.seed;
  r.trials = c.trials;
  r.workers = c.workers;
  return r;
}

std::string interval_text(const Statistic& s) {
  return format_double(s.value) + " [" + format_double(s.interval.lo) + ", " + format_double(s.interval.hi) + "]";
}

int finish(ExperimentReport& rep, const std::string& name, Outputs& outs, std::ostream& out, const Common& c,
           const std::string& summary, bool csv = true) {
  rep.config.emplace_back("subcommand", name);
  outs.add(name + ".json", report_json(rep));
  if (csv && !rep.columns.empty()) outs.add(name + ".csv", report_csv(rep));
  outs.commit();
  out << name << ": " << summary << (rep.gates.empty() ? "" : rep.passed() ? " PASS" : " FAIL") << " -> "
      << (fs::path(c.out) / (name + ".json")).string() << '\n';
  return rep.passed() ? kExitOk : kExitGateFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"First-passage percolation experiments on Z^2", "fpp"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option values (flags override it)");

  Common c;
  app.add_option("--dist", c.dist, "Edge-weight law: const:C, unif:A:B, exp:R, scaled:EPS:SPEC")->capture_default_str();
  app.add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app.add_option("--trials", c.trials, "Number of independent trials")->capture_default_str();
  app.add_option("--workers", c.workers, "OpenMP workers (0 = all available)")->capture_default_str();
  app.add_option("--out", c.out, "Output directory")->capture_default_str();
  app.add_flag("--force", c.force, "Overwrite existing output files");

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "Geodesic between two vertices; path CSV, profile CSV, optional SVG");
  std::string g_from, g_to, g_svg;
  std::vector<std::string> g_also;
  geo->add_option("--from", g_from, "Start vertex X,Y")->required();
  geo->add_option("--to", g_to, "End vertex X,Y")->required();
  geo->add_option("--also", g_also, "Extra geodesics FROM:TO (X,Y:X,Y), drawn in the SVG");
  geo->add_option("--svg", g_svg, "SVG file name (relative names go in --out)");

  // ball
  auto* ball = app.add_subcommand("ball", "Metric ball B(t) around the origin");
  double b_t = 10.0;
  ball->add_option("--t", b_t, "Radius")->capture_default_str();

  // coalesce
  auto* coal = app.add_subcommand("coalesce", "Coalescence of nearby geodesics");
  std::string c_y = "64,0";
  CoalescenceParams cp;
  coal->add_option("--y", c_y, "Displacement y")->capture_default_str();
  coal->add_option("--epsilon", cp.epsilon, "epsilon in (0, 1/17]")->capture_default_str();
  coal->add_option("--delta", cp.delta, "delta >= 0")->capture_default_str();
  coal->add_option("--pairs", cp.random_pairs, "Random endpoint quadruples per trial")->capture_default_str();

  // midpoint
  auto* mid = app.add_subcommand("midpoint", "Probability that z lies on gamma(u, v)");
  std::string m_u = "0,0", m_v = "64,0", m_z = "32,0";
  MidpointParams mp;
  mid->add_option("--u", m_u)->capture_default_str();
  mid->add_option("--v", m_v)->capture_default_str();
  mid->add_option("--z", m_z)->capture_default_str();
  mid->add_option("--ell", mp.ell, "Translates over Lambda_ell for the averaged estimator")->capture_default_str();

  // attract
  auto* att = app.add_subcommand("attract", "Attractive-interval and bounded-slope diagnostics");
  AttractivenessParams ap;
  std::string a_mode = "relaxed";
  att->add_option("--L", ap.L)->capture_default_str();
  att->add_option("--s", ap.s)->capture_default_str();
  att->add_option("--m", ap.m)->capture_default_str();
  att->add_option("--N", ap.N)->capture_default_str();
  att->add_option("--r", ap.r)->capture_default_str();
  att->add_option("--xi", ap.xi)->capture_default_str();
  att->add_option("--rho", ap.rho, "Bounded-slope constant")->capture_default_str();
  att->add_option("--rho1", ap.rho1, "Margin constant (<= 0: 4 * mean)")->capture_default_str();
  att->add_option("--rho2", ap.rho2)->capture_default_str();
  att->add_option("--mode", a_mode)->check(CLI::IsMember({"relaxed", "enforced"}))->capture_default_str();

  // probe
  auto* probe = app.add_subcommand("probe", "Single diagnostics: time, linf, wrong, staircase, berry");
  std::string p_kind = "time", p_dir = "1,0", p_xdist = "unif:0:1";
  std::int32_t p_n = 64, p_M = 400;
  double p_eps = 0.1, p_delta = 1.0 / 16.0;
  std::size_t p_samples = 1'000'000;
  WrongDirectionParams wp;
  probe->add_option("--kind", p_kind)->check(CLI::IsMember({"time", "linf", "wrong", "staircase", "berry"}))
      ->capture_default_str();
  probe->add_option("--direction", p_dir, "Direction X,Y (time, linf)")->capture_default_str();
  probe->add_option("--n", p_n, "Scale")->capture_default_str();
  probe->add_option("--theta-u", wp.theta_u)->capture_default_str();
  probe->add_option("--theta0", wp.theta0)->capture_default_str();
  probe->add_option("--thresholds", wp.thresholds, "R* values (wrong)")->delimiter(',');
  probe->add_option("--x-dist", p_xdist, "Law of X on [0, 1] (staircase, berry)")->capture_default_str();
  probe->add_option("--epsilon", p_eps)->capture_default_str();
  probe->add_option("--delta", p_delta)->capture_default_str();
  probe->add_option("--M", p_M)->capture_default_str();
  probe->add_option("--samples", p_samples, "Samples (berry)")->capture_default_str();

  // tails
  auto* tails = app.add_subcommand("tails", "Tail calibration of passage times and geodesic lengths");
  TailParams tp;
  tails->add_option("--distances", tp.distances)->delimiter(',');
  tails->add_option("--level", tp.exceedance, "Exceedance level for suggested constants")->capture_default_str();

  // shape
  auto* shape = app.add_subcommand("shape", "Limit-shape boundary from metric balls");
  double s_t = 20.0;
  int s_bins = kShapeBins;
  shape->add_option("--t", s_t)->capture_default_str();
  shape->add_option("--bins", s_bins)->capture_default_str();

  // flatedge
  auto* flat = app.add_subcommand("flatedge", "Flat-edge test between two directions");
  std::string f_a, f_b;
  double f_t1 = 0.0, f_t2 = std::numbers::pi / 4, f_R1 = 1.0, f_R2 = 1.0;
  std::int32_t f_n = 64;
  flat->add_option("--a", f_a, "First vector X,Y (overrides the polar form)");
  flat->add_option("--b", f_b, "Second vector X,Y");
  flat->add_option("--theta1", f_t1)->capture_default_str();
  flat->add_option("--theta2", f_t2)->capture_default_str();
  flat->add_option("--R1", f_R1)->capture_default_str();
  flat->add_option("--R2", f_R2)->capture_default_str();
  flat->add_option("--n", f_n)->capture_default_str();

  // sides
  auto* sides = app.add_subcommand("sides", "Flat-edge evidence under 1 + epsilon X");
  double sd_eps = 0.05;
  std::string sd_probes;
  bool sd_schedule = false;
  std::int32_t sd_n = 64;
  sides->add_option("--epsilon", sd_eps)->capture_default_str();
  sides->add_option("--probes", sd_probes, "Pairs D1:D2,D1:D2");
  sides->add_flag("--schedule", sd_schedule, "Use consecutive pairs of the delta_i schedule");
  sides->add_option("--n", sd_n)->capture_default_str();
  sides->add_option("--x-dist", p_xdist, "Law of X")->capture_default_str();

  // mw
  auto* mw = app.add_subcommand("mw", "Mermin-Wagner inequality checks");
  bool mw_gauss = false;
  std::vector<double> mw_tau;
  std::string mw_box, mw_fixture;
  double mw_sigma = 0.05, mw_threshold = 5.75;
  mw->add_flag("--gaussian", mw_gauss, "Closed form for a Gaussian product box");
  mw->add_option("--tau", mw_tau, "Shift vector (gaussian)")->delimiter(',');
  mw->add_option("--box", mw_box, "Box LO,HI:LO,HI (gaussian)");
  mw->add_option("--fixture", mw_fixture, "Restricted fixture file (general)");
  mw->add_option("--sigma", mw_sigma, "Shift on every edge of the restricted region (general)")->capture_default_str();
  mw->add_option("--threshold", mw_threshold, "Event: restricted time >= threshold (general)")->capture_default_str();

  // fixture
  auto* fix = app.add_subcommand("fixture", "Restricted passage time on a fixture file");
  std::string fx_file;
  fix->add_option("--file", fx_file, "Fixture file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    Outputs outs(c.out, c.force);

    if (geo->parsed()) {
      const auto env = Environment(c.seed, WeightDistribution::parse(c.dist));
      std::vector<LatticePath> paths;
      const auto g = geodesic(env, parse_vertex(g_from), parse_vertex(g_to));
      paths.push_back(g.path);
      for (const auto& spec : g_also) {
        const auto ends = split(spec, ':');
        if (ends.size() != 2) throw UsageError("--also expects X,Y:X,Y");
        paths.push_back(geodesic(env, parse_vertex(ends[0]), parse_vertex(ends[1])).path);
      }
      for (std::size_t k = 0; k < paths.size(); ++k) {
        std::ostringstream csv;
        write_path_csv(csv, paths[k]);
        outs.add(k == 0 ? "geodesic.csv" : "geodesic_" + std::to_string(k) + ".csv", csv.str());
      }
      std::ostringstream prof;
      write_profile_csv(prof, pioneer_profile(g.path));
      outs.add("geodesic_profile.csv", prof.str());
      if (!g_svg.empty()) outs.add(g_svg, render_svg(paths));
      outs.commit();
      out << "geodesic: time " << format_double(g.time) << ", " << g.path.length() << " edges -> "
          << outs.path_of("geodesic.csv").string() << '\n';
      return kExitOk;
    }

    if (ball->parsed()) {
      const auto env = Environment(c.seed, WeightDistribution::parse(c.dist));
      const auto vs = metric_ball(env, b_t);
      std::ostringstream csv;
      write_vertices_csv(csv, vs);
      outs.add("ball.csv", csv.str());
      outs.commit();
      out << "ball: " << vs.size() << " vertices, Hausdorff to l1 diamond "
          << format_double(hausdorff_to_l1_diamond(vs, b_t)) << " -> " << outs.path_of("ball.csv").string() << '\n';
      return kExitOk;
    }

    if (coal->parsed()) {
      cp.y = parse_vertex(c_y);
      auto rep = coalescence_experiment(run_config(c), cp);
      return finish(rep, "coalesce", outs, out, c, "exceedance " + interval_text(rep.aggregate("exceedance")));
    }

    if (mid->parsed()) {
      mp.u = parse_vertex(m_u);
      mp.v = parse_vertex(m_v);
      mp.z = parse_vertex(m_z);
      auto rep = midpoint_experiment(run_config(c), mp);
      return finish(rep, "midpoint", outs, out, c,
                    "direct " + interval_text(rep.aggregate("direct")) + ", averaged " +
                        interval_text(rep.aggregate("averaged")));
    }

    if (att->parsed()) {
      ap.mode = a_mode == "enforced" ? HopBoundMode::enforced : HopBoundMode::relaxed;
      auto rep = attractiveness_diagnostic(run_config(c), ap);
      return finish(rep, "attract", outs, out, c,
                    "attractive fraction " + interval_text(rep.aggregate("attractive_fraction")) +
                        ", bounded slope " + interval_text(rep.aggregate("bounded_slope")));
    }

    if (probe->parsed()) {
      const auto cfg = run_config(c);
      if (p_kind == "wrong") {
        if (probe->get_option("--n")->count() > 0) wp.n = p_n;
        auto rep = wrong_direction_probe(cfg, wp);
        return finish(rep, "probe", outs, out, c, "max radius " + interval_text(rep.aggregate("max_radius")));
      }
      ExperimentReport rep;
      rep.kind = "probe-" + p_kind;
      rep.config = {{"dist", cfg.dist.spec()}, {"seed", std::to_string(c.seed)}, {"trials", std::to_string(c.trials)}};
      std::string summary;
      if (p_kind == "time") {
        const auto dp = time_constant(cfg.dist, parse_vec(p_dir), p_n, c.trials, c.seed, c.workers);
        std::ostringstream csv;
        write_probe_csv(csv, {dp});
        outs.add("probe_time.csv", csv.str());
        rep.config.emplace_back("direction", p_dir);
        rep.config.emplace_back("n", std::to_string(p_n));
        rep.aggregates.push_back({"mu", dp.estimate.mean, dp.estimate.std_err,
                                  {dp.estimate.mean - 1.96 * dp.estimate.std_err,
                                   dp.estimate.mean + 1.96 * dp.estimate.std_err},
                                  dp.estimate.n});
        summary = "mu " + format_double(dp.estimate.mean) + " +- " + format_double(dp.estimate.std_err);
        rep.columns = {"trial", "mu"};
        for (std::size_t i = 0; i < dp.samples.size(); ++i) rep.rows.push_back({static_cast<double>(i), dp.samples[i]});
      } else if (p_kind == "linf") {
        const auto r = linf_bound_check(cfg.dist, parse_vec(p_dir), p_n, c.trials, c.seed, c.workers);
        rep.config.emplace_back("x", p_dir);
        rep.config.emplace_back("n", std::to_string(p_n));
        rep.aggregates.push_back({"margin", r.margin.mean, r.margin.std_err, {}, r.margin.n});
        rep.aggregates.push_back({"mu_x", r.mu_x.mean, r.mu_x.std_err, {}, r.mu_x.n});
        rep.aggregates.push_back({"mu_axis", r.mu_axis.mean, r.mu_axis.std_err, {}, r.mu_axis.n});
        rep.gates.push_back({"mu(x) >= |x|_inf mu(1,0) - 3 se", r.holds, "margin " + format_double(r.margin.mean)});
        summary = "margin " + format_double(r.margin.mean) + " +- " + format_double(r.margin.std_err);
        rep.columns = {"trial", "mu_x", "mu_axis", "margin"};
        for (std::size_t i = 0; i < r.samples.size(); ++i) {
          const auto [mx, ma] = r.samples[i];
          rep.rows.push_back({static_cast<double>(i), mx, ma, mx - ma});
        }
      } else if (p_kind == "staircase") {
        const auto r = staircase_bound(WeightDistribution::parse(p_xdist), p_eps, p_delta, c.trials, c.seed, c.workers);
        rep.config = {{"x_dist", p_xdist}, {"seed", std::to_string(c.seed)}, {"trials", std::to_string(c.trials)},
                      {"epsilon", format_double(p_eps)}, {"delta", format_double(p_delta)}};
        rep.aggregates.push_back({"lhs", r.lhs, r.std_err, {}, c.trials});
        rep.aggregates.push_back({"rhs", r.rhs, 0.0, {r.rhs, r.rhs}, 1});
        rep.aggregates.push_back({"gap", r.gap, r.std_err, {r.gap - 1.96 * r.std_err, r.gap + 1.96 * r.std_err}, c.trials});
        rep.gates.push_back({"gap > 3 se", r.gap > 3.0 * r.std_err, "gap " + format_double(r.gap)});
        if (!r.lemma_regime) rep.notes.push_back("epsilon >= delta: outside the range where the gap bounds mu");
        summary = "gap " + format_double(r.gap) + " +- " + format_double(r.std_err);
        rep.columns = {"trial", "min_time"};
        for (std::size_t i = 0; i < r.samples.size(); ++i) rep.rows.push_back({static_cast<double>(i), r.samples[i]});
      } else {
        const auto r = berry_probe(WeightDistribution::parse(p_xdist), p_M, p_samples, c.seed, c.workers);
        rep.config = {{"x_dist", p_xdist}, {"seed", std::to_string(c.seed)}, {"samples", std::to_string(p_samples)},
                      {"M", std::to_string(p_M)}};
        rep.aggregates.push_back({"probability", r.estimate.p, r.estimate.std_err, r.estimate.wilson, r.estimate.n});
        rep.aggregates.push_back({"threshold", r.threshold, 0.0, {r.threshold, r.threshold}, 1});
        summary = "P " + format_double(r.estimate.p) + " [" + format_double(r.estimate.wilson.lo) + ", " +
                  format_double(r.estimate.wilson.hi) + "]";
        // One row per block of samples; a row per sample would run to millions of lines.
        rep.columns = {"block", "samples", "hits"};
        for (std::size_t b = 0; b < r.block_hits.size(); ++b)
          rep.rows.push_back({static_cast<double>(b),
                              static_cast<double>(std::min(p_samples - b * kBerryBlock, kBerryBlock)),
                              static_cast<double>(r.block_hits[b])});
      }
      return finish(rep, "probe", outs, out, c, summary);
    }

    if (tails->parsed()) {
      auto rep = tail_fit(run_config(c), tp);
      return finish(rep, "tails", outs, out, c,
                    "suggested rho1 " + format_double(rep.aggregate("rho1_suggested").value) + ", rho2 " +
                        format_double(rep.aggregate("rho2_suggested").value));
    }

    if (shape->parsed()) {
      const auto cfg = run_config(c);
      const auto se = shape_boundary(cfg.dist, s_t, c.trials, c.seed, c.workers, s_bins);
      std::ostringstream csv;
      write_boundary_csv(csv, se);
      outs.add("shape.csv", csv.str());
      ExperimentReport rep;
      rep.kind = "shape";
      rep.config = {{"dist", cfg.dist.spec()}, {"seed", std::to_string(c.seed)}, {"trials", std::to_string(c.trials)},
                    {"t", format_double(s_t)}, {"bins", std::to_string(s_bins)}};
      rep.aggregates.push_back({"reflection_gap", se.reflection_gap, 0.0, {}, 1});
      rep.aggregates.push_back({"reflection_gap_sigmas", se.reflection_gap_sigmas, 0.0, {}, 1});
      return finish(rep, "shape", outs, out, c, "reflection gap " + format_double(se.reflection_gap), false);
    }

    if (flat->parsed()) {
      const auto cfg = run_config(c);
      const auto r = !f_a.empty() || !f_b.empty()
                         ? flat_edge_test(cfg.dist, parse_vec(f_a), parse_vec(f_b), f_n, c.trials, c.seed, c.workers)
                         : flat_edge_test(cfg.dist, f_t1, f_t2, f_R1, f_R2, f_n, c.trials, c.seed, c.workers);
      ExperimentReport rep;
      rep.kind = "flatedge";
      rep.config = {{"dist", cfg.dist.spec()},
                    {"seed", std::to_string(c.seed)},
                    {"trials", std::to_string(c.trials)},
                    {"a", format_double(r.a.x) + "," + format_double(r.a.y)},
                    {"b", format_double(r.b.x) + "," + format_double(r.b.y)},
                    {"n", std::to_string(f_n)}};
      rep.aggregates.push_back({"delta", r.delta.mean, r.delta.std_err, {}, r.delta.n});
      rep.aggregates.push_back({"mu_a", r.mu_a.mean, r.mu_a.std_err, {}, r.mu_a.n});
      rep.aggregates.push_back({"mu_b", r.mu_b.mean, r.mu_b.std_err, {}, r.mu_b.n});
      rep.aggregates.push_back({"mu_sum", r.mu_sum.mean, r.mu_sum.std_err, {}, r.mu_sum.n});
      rep.notes.push_back("verdict: " + to_string(r.verdict));
      rep.gates.push_back({"delta >= -3 se", r.delta.mean >= -3.0 * r.delta.std_err, ""});
      rep.columns = {"trial", "mu_a", "mu_b", "mu_sum", "delta"};
      for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const auto [ta, tb, ts] = r.samples[i];
        rep.rows.push_back({static_cast<double>(i), ta, tb, ts, ta + tb - ts});
      }
      return finish(rep, "flatedge", outs, out, c,
                    to_string(r.verdict) + ", delta " + format_double(r.delta.mean) + " +- " +
                        format_double(r.delta.std_err));
    }

    if (sides->parsed()) {
      auto probes = parse_pairs(sd_probes);
      const auto sched = sides_schedule(sd_eps);
      if (sd_schedule)
        for (std::size_t i = 0; i + 1 < sched.size(); ++i) probes.emplace_back(sched[i], sched[i + 1]);
      const auto w = sides_witness(sd_eps, probes, sd_n, c.trials, c.seed, c.workers, WeightDistribution::parse(p_xdist));
      ExperimentReport rep;
      rep.kind = "sides";
      rep.config = {{"x_dist", p_xdist}, {"seed", std::to_string(c.seed)}, {"trials", std::to_string(c.trials)},
                    {"epsilon", format_double(sd_eps)}, {"n", std::to_string(sd_n)}};
      rep.notes.push_back(w.header);
      std::string s;
      for (auto d : sched) s += (s.empty() ? "" : ",") + format_double(d);
      rep.notes.push_back("schedule delta_i: " + (s.empty() ? std::string("empty at this epsilon") : s));
      rep.columns = {"d1", "d2", "delta", "stderr", "strictly_convex"};
      for (std::size_t i = 0; i < w.results.size(); ++i) {
        const auto& r = w.results[i];
        rep.rows.push_back({w.probes[i].first, w.probes[i].second, r.delta.mean, r.delta.std_err,
                            r.verdict == FlatEdgeVerdict::strictly_convex ? 1.0 : 0.0});
        rep.notes.push_back("probe " + std::to_string(i) + ": " + to_string(r.verdict));
      }
      rep.aggregates.push_back({"strictly_convex", static_cast<double>(w.strictly_convex), 0.0, {}, w.results.size()});
      return finish(rep, "sides", outs, out, c,
                    std::to_string(w.strictly_convex) + "/" + std::to_string(w.results.size()) + " strictly convex");
    }

    if (mw->parsed()) {
      if (mw_gauss) {
        const auto box = parse_box(mw_box);
        const auto r = mw_check_gaussian(mw_tau, box);
        auto rep = to_report(r);
        out << "lhs " << format_double(r.lhs) << " rhs " << format_double(r.rhs) << ' '
            << (r.holds ? "HOLDS" : "FAILS") << '\n';
        outs.add("mw.json", report_json(rep));
        outs.commit();
        return r.holds ? kExitOk : kExitGateFailed;
      }
      Fixture fx;
      if (!mw_fixture.empty()) {
        std::ifstream in(mw_fixture);
        if (!in) throw UsageError("cannot open " + mw_fixture);
        fx = parse_fixture(in);
      } else {
        fx.path = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
        fx.J = IntervalJ(0, 4);
        fx.rho2 = 2.0;
      }
      const auto q = fx.query();
      const auto tau = uniform_shift(restricted_region(q), mw_sigma);
      const std::size_t trials =
          app.get_option("--trials")->count() > 0 ? c.trials : std::max<std::size_t>(c.trials, kMwMinTrials);
      const auto r = mw_check_environment(
          WeightDistribution::parse(c.dist), tau,
          [&](const Environment& env) { return restricted_passage_time(env, q).time >= mw_threshold; }, trials, c.seed,
          c.workers);
      auto rep = to_report(r);
      rep.config = {{"dist", c.dist},
                    {"seed", std::to_string(c.seed)},
                    {"trials", std::to_string(trials)},
                    {"sigma", format_double(mw_sigma)},
                    {"threshold", format_double(mw_threshold)},
                    {"edges", std::to_string(tau.size())}};
      return finish(rep, "mw", outs, out, c,
                    "margin " + format_double(r.margin) + " (bootstrap se " + format_double(r.std_err) + ")");
    }

    if (fix->parsed()) {
      std::ifstream in(fx_file);
      const auto fx = parse_fixture(in);
      const auto res = restricted_passage_time(fx.environment(), fx.query());
      outs.add("fixture.json", restricted_result_json(res));
      outs.commit();
      out << "fixture: time " << (res.feasible() ? format_double(res.time) : std::string("inf")) << ", "
          << res.labels_expanded << " labels -> " << outs.path_of("fixture.json").string() << '\n';
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitGateFailed;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace fpp::cli
