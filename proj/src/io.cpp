#include "fpp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fpp {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

bool parse_vertex(std::string_view s, Vertex& v) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return false;
  return parse_number(s.substr(0, comma), v.x) && parse_number(s.substr(comma + 1), v.y);
}

}  // namespace

// Paths -----------------------------------------------------------------------

void write_path_csv(std::ostream& out, const LatticePath& p) {
  out << "x,y\n";
  for (auto v : p.vertices()) out << v.x << ',' << v.y << '\n';
}

LatticePath parse_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,y") throw std::runtime_error("path csv: expected header x,y");
  std::vector<Vertex> vs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    Vertex v;
    if (!parse_vertex(line, v)) throw std::runtime_error("path csv: bad vertex on line " + std::to_string(lineno));
    vs.push_back(v);
  }
  if (vs.empty()) throw std::runtime_error("path csv: no vertices");
  try {
    return LatticePath(std::move(vs));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("path csv: ") + e.what());
  }
}

void write_profile_csv(std::ostream& out, const PioneerProfile& profile) {
  out << "x,f\n";
  for (auto x = profile.t1(); x <= profile.t2(); ++x) out << x << ',' << profile.f(x) << '\n';
}

void write_vertices_csv(std::ostream& out, const std::vector<Vertex>& vs) {
  out << "x,y\n";
  for (auto v : vs) out << v.x << ',' << v.y << '\n';
}

void write_boundary_csv(std::ostream& out, const ShapeEstimate& s) {
  out << "theta,radius,stderr\n";
  for (const auto& b : s.bins)
    if (b.hits > 0) out << format_double(b.theta) << ',' << format_double(b.radius) << ',' << format_double(b.std_err) << '\n';
}

void write_probe_csv(std::ostream& out, const std::vector<DirectionProbe>& probes) {
  out << "direction_x,direction_y,n,mean,stderr\n";
  for (const auto& p : probes)
    out << format_double(p.direction.x) << ',' << format_double(p.direction.y) << ',' << p.n << ','
        << format_double(p.estimate.mean) << ',' << format_double(p.estimate.std_err) << '\n';
}

// SVG -------------------------------------------------------------------------

std::string default_stroke(std::size_t k) {
  static const char* palette[] = {"#1d4ed8", "#dc2626", "#15803d", "#ea580c", "#0e7490", "#a16207"};
  return palette[k % std::size(palette)];
}

std::string render_svg(const std::vector<LatticePath>& paths, const std::vector<PathStyle>& styles,
                       const SvgOptions& opts) {
  if (paths.empty()) throw std::invalid_argument("render_svg: no paths");
  std::int64_t x0 = paths[0].front().x, x1 = x0, y0 = paths[0].front().y, y1 = y0;
  for (const auto& p : paths)
    for (auto v : p.vertices()) {
      x0 = std::min<std::int64_t>(x0, v.x);
      x1 = std::max<std::int64_t>(x1, v.x);
      y0 = std::min<std::int64_t>(y0, v.y);
      y1 = std::max<std::int64_t>(y1, v.y);
    }
  const double s = opts.scale, pad = opts.padding;
  const double W = 2 * pad + static_cast<double>(x1 - x0) * s;
  const double H = 2 * pad + static_cast<double>(y1 - y0) * s;
  auto px = [&](Vertex v) { return format_double(pad + static_cast<double>(v.x - x0) * s); };
  auto py = [&](Vertex v) { return format_double(pad + static_cast<double>(y1 - v.y) * s); };

  // First path owning each edge, and how many paths use it.
  std::map<EdgeKey, std::pair<std::size_t, int>> use;
  for (std::size_t k = 0; k < paths.size(); ++k)
    for (const auto& e : paths[k].edges()) {
      auto [it, fresh] = use.try_emplace(e, k, 0);
      ++it->second.second;
    }

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_double(W) << "\" height=\""
      << format_double(H) << "\" viewBox=\"0 0 " << format_double(W) << ' ' << format_double(H) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << format_double(W) << "\" height=\"" << format_double(H) << "\" fill=\""
      << opts.background << "\"/>\n";

  auto polyline = [&](const std::vector<Vertex>& run, const std::string& stroke) {
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << format_double(opts.stroke_width)
        << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\" points=\"";
    for (std::size_t i = 0; i < run.size(); ++i) out << (i ? " " : "") << px(run[i]) << ',' << py(run[i]);
    out << "\"/>\n";
  };

  for (std::size_t k = 0; k < paths.size(); ++k) {
    const auto& p = paths[k];
    const std::string own = k < styles.size() && !styles[k].stroke.empty() ? styles[k].stroke : default_stroke(k);
    if (p.size() == 1) {
      const double h = opts.stroke_width;
      out << "<rect x=\"" << format_double(pad + static_cast<double>(p.front().x - x0) * s - h) << "\" y=\""
          << format_double(pad + static_cast<double>(y1 - p.front().y) * s - h) << "\" width=\""
          << format_double(2 * h) << "\" height=\"" << format_double(2 * h) << "\" fill=\"" << own << "\"/>\n";
      continue;
    }
    // Runs of consecutive edges with the same class: 0 own, 1 shared and drawn
    // here, 2 shared but drawn by an earlier path.
    std::vector<Vertex> run{p[0]};
    int cls = -1;
    auto flush = [&] {
      if (run.size() >= 2 && cls != 2) polyline(run, cls == 1 ? opts.overlap : own);
    };
    for (std::size_t i = 1; i < p.size(); ++i) {
      const auto& u = use.at(EdgeKey::between(p[i - 1], p[i]));
      const int c = u.second < 2 ? 0 : (u.first == k ? 1 : 2);
      if (c != cls && cls != -1) {
        flush();
        run = {p[i - 1]};
      }
      cls = c;
      run.push_back(p[i]);
    }
    flush();
  }
  out << "</svg>\n";
  return out.str();
}

// Fixtures --------------------------------------------------------------------

Environment Fixture::environment() const { return Environment(seed, dist).with_overlay(overlay); }

RestrictedQuery Fixture::query() const { return RestrictedQuery::from_path(LatticePath(path), J, r, rho2, L, mode); }

Fixture parse_fixture(std::istream& in) {
  Fixture f;
  bool have_path = false, have_j = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("fixture line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<std::string> args;
    for (std::string a; ls >> a;) args.push_back(a);
    auto need = [&](std::size_t n) {
      if (args.size() != n) fail(key + " expects " + std::to_string(n) + " argument(s)");
    };
    if (key == "dist") {
      need(1);
      try {
        f.dist = WeightDistribution::parse(args[0]);
      } catch (const std::exception& e) {
        fail(e.what());
      }
    } else if (key == "seed") {
      need(1);
      if (!parse_number(args[0], f.seed)) fail("bad seed");
    } else if (key == "path") {
      f.path.clear();
      for (const auto& a : args) {
        Vertex v;
        if (!parse_vertex(a, v)) fail("bad vertex " + a);
        f.path.push_back(v);
      }
      if (f.path.empty()) fail("empty path");
      have_path = true;
    } else if (key == "J") {
      need(2);
      std::int32_t a = 0, b = 0;
      if (!parse_number(args[0], a) || !parse_number(args[1], b) || a > b) fail("bad interval");
      f.J = IntervalJ(a, b);
      have_j = true;
    } else if (key == "r") {
      need(1);
      if (!parse_number(args[0], f.r)) fail("bad r");
    } else if (key == "rho2") {
      need(1);
      if (!parse_number(args[0], f.rho2)) fail("bad rho2");
    } else if (key == "L") {
      need(1);
      if (!parse_number(args[0], f.L)) fail("bad L");
    } else if (key == "mode") {
      need(1);
      if (args[0] == "relaxed")
        f.mode = HopBoundMode::relaxed;
      else if (args[0] == "enforced")
        f.mode = HopBoundMode::enforced;
      else
        fail("mode must be relaxed or enforced");
    } else if (key == "weight") {
      need(3);
      Vertex v;
      double w = 0.0;
      if (!parse_vertex(args[0], v)) fail("bad vertex " + args[0]);
      if (args[1] != "H" && args[1] != "V") fail("orientation must be H or V");
      if (!parse_number(args[2], w) || !(w >= 0.0)) fail("bad weight");
      f.overlay[EdgeKey{v.x, v.y, args[1] == "H" ? Orientation::horizontal : Orientation::vertical}] = w;
    } else {
      fail("unknown directive " + key);
    }
  }
  if (!have_path) throw std::runtime_error("fixture: missing path");
  if (!have_j) throw std::runtime_error("fixture: missing J");
  try {
    (void)f.query();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("fixture: ") + e.what());
  }
  return f;
}

std::string restricted_result_json(const RestrictedResult& r) {
  using nlohmann::json;
  json j;
  j["feasible"] = r.feasible();
  j["time"] = std::isfinite(r.time) ? json(r.time) : json(nullptr);
  j["labels_expanded"] = r.labels_expanded;
  j["hop_bound_ok"] = r.hop_bound_ok;
  j["elementary_search"] = r.elementary_search;
  json path = json::array();
  if (r.path)
    for (auto v : r.path->vertices()) path.push_back({v.x, v.y});
  j["path"] = path;
  return j.dump(2) + "\n";
}

}  // namespace fpp
