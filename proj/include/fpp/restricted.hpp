#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>

#include "fpp/environment.hpp"
#include "fpp/geodesic.hpp"
#include "fpp/geometry.hpp"
#include "fpp/stats.hpp"

namespace fpp {

/// (log L)^2 with the natural logarithm; 0 for L <= 1.
double log_sq(double L);

enum class HopBoundMode { enforced, relaxed };

/// Parameters of the constrained class Q_p(J): paths edge-disjoint from p,
/// running from Tube_r(p) ∩ S_a to Tube_r(p) ∩ S_b, with at least ceil(|J|/2)
/// edges inside Tube_r(p) ∩ S_J and at most rho2 * max(|u - v|_1, log^2 L)
/// edges.
struct RestrictedQuery {
  PioneerProfile profile;
  std::unordered_set<EdgeKey, EdgeKeyHash> p_edges;
  IntervalJ J;
  std::int32_t r = 1;
  double rho2 = 8.0;
  double L = 2.0;
  HopBoundMode mode = HopBoundMode::relaxed;

  /// Validates J against the profile range and r >= 1.
  static RestrictedQuery from_path(const LatticePath& p, IntervalJ J, std::int32_t r, double rho2, double L,
                                   HopBoundMode mode = HopBoundMode::relaxed);
};

/// Largest admissible edge count for endpoints u, v.
std::int64_t hop_limit(const RestrictedQuery& q, Vertex u, Vertex v);

/// Box containing every path of Q_p(J). The search never reads a weight of an
/// edge that is not inside this box, in either mode.
SearchBox restricted_region(const RestrictedQuery& q);

struct RestrictedResult {
  double time = std::numeric_limits<double>::infinity();
  std::optional<LatticePath> path;
  std::int64_t labels_expanded = 0;
  /// Whether the returned path satisfies the hop bound (always true when enforced).
  bool hop_bound_ok = true;
  /// The walk relaxation was not simple and the elementary search ran.
  bool elementary_search = false;

  bool feasible() const { return path.has_value(); }
};

struct RestrictedOptions {
  /// Cap on labels popped by the elementary search; exceeding it throws
  /// std::runtime_error.
  std::int64_t label_budget = 5'000'000;
};

/// Exact minimum passage time over Q_p(J) (relaxed mode drops the hop bound
/// but stays inside restricted_region). +infinity when the class is empty.
RestrictedResult restricted_passage_time(const Environment& env, const RestrictedQuery& q,
                                         const RestrictedOptions& opts = {});

/// T((a, f(a)), (b, f(b))) along a fresh geodesic.
double pioneer_passage_time(const Environment& env, const PioneerProfile& profile, const IntervalJ& J);

/// Monte-Carlo mean of the pioneer passage time over k_seeds independent
/// environments of `dist` (seeds derived from `seed`).
Estimate expected_pioneer_time(const WeightDistribution& dist, const PioneerProfile& profile, const IntervalJ& J,
                               std::size_t k_seeds, std::uint64_t seed = 0, int workers = 0);

struct DeviationResult {
  double deviation = 0.0;
  double subpath_time = 0.0;
  Estimate expected;
};

/// T(p[J]) minus the estimated expected pioneer passage time, where p[J] is the
/// piece of p between its pioneer points above J.a and J.b.
DeviationResult deviation(const Environment& env, const LatticePath& p, const IntervalJ& J, std::size_t k_seeds,
                          std::uint64_t seed = 0, int workers = 0);

struct AttractParams {
  std::int32_t r = 1;
  double rho1 = 6.0;
  double rho2 = 8.0;
  double L = 2.0;
  HopBoundMode mode = HopBoundMode::relaxed;
};

struct AttractiveResult {
  bool attractive = false;
  double restricted_time = 0.0;
  double pioneer_time = 0.0;
  double threshold = 0.0;
};

/// Evaluates restricted time > pioneer time + 2 rho1 max(r, log^2 L). Defined
/// for any path; for a geodesic this is the attractiveness event.
AttractiveResult attractive_interval(const Environment& env, const LatticePath& gamma, const IntervalJ& J,
                                     const AttractParams& params);

}  // namespace fpp
