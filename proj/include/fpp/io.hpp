#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fpp/environment.hpp"
#include "fpp/experiments.hpp"
#include "fpp/geometry.hpp"
#include "fpp/restricted.hpp"
#include "fpp/shape.hpp"

namespace fpp {

/// %.17g: lossless for binary64.
std::string format_double(double v);

// Reports --------------------------------------------------------------------

/// JSON document with "format": "fpp-report/1". Non-finite numbers become null.
std::string report_json(const ExperimentReport& r);
/// Per-trial rows, header from r.columns.
std::string report_csv(const ExperimentReport& r);

// Paths and profiles ---------------------------------------------------------

/// Header "x,y", one vertex per line.
void write_path_csv(std::ostream& out, const LatticePath& p);
/// Throws std::runtime_error on malformed input.
LatticePath parse_path_csv(std::istream& in);

/// Header "x,f".
void write_profile_csv(std::ostream& out, const PioneerProfile& profile);
/// Header "x,y".
void write_vertices_csv(std::ostream& out, const std::vector<Vertex>& vs);
/// Header "theta,radius,stderr"; bins never hit are skipped.
void write_boundary_csv(std::ostream& out, const ShapeEstimate& s);
/// Header "direction_x,direction_y,n,mean,stderr".
void write_probe_csv(std::ostream& out, const std::vector<DirectionProbe>& probes);

// SVG ------------------------------------------------------------------------

struct PathStyle {
  std::string stroke;
};

struct SvgOptions {
  double scale = 8.0;
  double stroke_width = 2.0;
  double padding = 8.0;
  std::string overlap = "#7b2cbf";
  std::string background = "#ffffff";
};

/// Default stroke for the k-th path.
std::string default_stroke(std::size_t k);

/// One polyline per maximal run of edges. Edges used by two or more paths are
/// drawn once in the overlap colour. Deterministic for fixed input; throws
/// std::invalid_argument for an empty list.
std::string render_svg(const std::vector<LatticePath>& paths, const std::vector<PathStyle>& styles = {},
                       const SvgOptions& opts = {});

// Restricted fixtures --------------------------------------------------------

/// Declarative restricted-path instance. Text format, one directive per line,
/// '#' starts a comment:
///
///   dist unif:1:2
///   seed 7
///   path 0,0 1,0 2,0 3,0 4,0
///   J 0 4
///   r 1
///   rho2 8
///   L 2
///   mode relaxed|enforced
///   weight X,Y H|V VALUE        (overlay entry; repeatable)
struct Fixture {
  WeightDistribution dist = WeightDistribution::uniform(1.0, 2.0);
  std::uint64_t seed = 1;
  std::vector<Vertex> path;
  IntervalJ J;
  std::int32_t r = 1;
  double rho2 = 8.0;
  double L = 2.0;
  HopBoundMode mode = HopBoundMode::relaxed;
  Overlay overlay;

  Environment environment() const;
  RestrictedQuery query() const;
};

/// Throws std::runtime_error with the line number on malformed input.
Fixture parse_fixture(std::istream& in);

/// Time (null when infinite), feasibility, search effort and the path inline.
std::string restricted_result_json(const RestrictedResult& r);

}  // namespace fpp
