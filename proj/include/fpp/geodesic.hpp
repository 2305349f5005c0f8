#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fpp/environment.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

/// Axis-aligned vertex box [lo, hi] bounding a Dijkstra frontier.
struct SearchBox {
  Vertex lo;
  Vertex hi;

  /// Bounding box of `points` padded by `margin` on every side.
  static SearchBox around(std::span<const Vertex> points, std::int64_t margin);
  /// Box for a point-to-point query: margin max(2 * |u - v|_1, 64).
  static SearchBox for_pair(Vertex u, Vertex v);

  bool contains(Vertex v) const { return v.x >= lo.x && v.x <= hi.x && v.y >= lo.y && v.y <= hi.y; }
  bool on_boundary(Vertex v) const { return v.x == lo.x || v.x == hi.x || v.y == lo.y || v.y == hi.y; }
  std::int64_t width() const { return std::int64_t{hi.x} - lo.x + 1; }
  std::int64_t height() const { return std::int64_t{hi.y} - lo.y + 1; }
};

/// Order in which the four neighbours are relaxed. Results do not depend on
/// it; the option exists so tests can detect accidental order dependence.
using NeighborOrder = std::array<std::uint8_t, 4>;  // indices into {+x, -x, +y, -y}
inline constexpr NeighborOrder kDefaultNeighborOrder{0, 1, 2, 3};

struct SearchOptions {
  NeighborOrder order = kDefaultNeighborOrder;
  /// Overrides the starting box margin (0 keeps the default rule).
  std::int64_t initial_margin = 0;
};

struct GeodesicResult {
  double time = 0.0;
  LatticePath path = LatticePath::trivial({});
  std::int64_t settled = 0;
  int box_growths = 0;
};

/// Sum of edge weights along p; 0 for a single vertex.
double path_time(const Environment& env, const LatticePath& p);

/// Minimal-time path from u to v, oriented u -> v.
///
/// Exact ties are resolved by the lexicographic order on (distance,
/// predecessor (y, x), vertex (y, x)). The search is confined to a box that is
/// doubled and re-run until the result is certified: the path stays off the
/// boundary and no boundary vertex was reached strictly earlier than v.
/// The returned time is path_time of the returned path.
GeodesicResult geodesic(const Environment& env, Vertex u, Vertex v, const SearchOptions& opts = {});

double passage_time(const Environment& env, Vertex u, Vertex v, const SearchOptions& opts = {});

/// Geodesics from one source to several targets out of a single search.
/// Element i equals geodesic(env, u, targets[i]).
std::vector<GeodesicResult> geodesics_from(const Environment& env, Vertex u, std::span<const Vertex> targets,
                                           const SearchOptions& opts = {});

/// { v : T(0, v) <= t }, sorted in (y, x) order.
std::vector<Vertex> metric_ball(const Environment& env, double t);

/// Number of undirected edges in exactly one of p and q.
std::size_t symmetric_difference(const LatticePath& p, const LatticePath& q);

/// Contiguous piece of p from a to b (reversed when b precedes a). Throws
/// std::invalid_argument if either vertex is not on p.
LatticePath subpath_between(const LatticePath& p, Vertex a, Vertex b);

}  // namespace fpp
