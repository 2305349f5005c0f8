#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fpp/geodesic.hpp"
#include "fpp/restricted.hpp"
#include "oracles.hpp"

using namespace fpp;

namespace {

const auto kU12 = WeightDistribution::uniform(1.0, 2.0);

LatticePath straight(int x0, int x1, int y) {
  std::vector<Vertex> vs;
  for (int x = x0; x <= x1; ++x) vs.push_back({x, y});
  return LatticePath(vs);
}

SearchBox widen(SearchBox b, int by) {
  return {{b.lo.x - by, b.lo.y - by}, {b.hi.x + by, b.hi.y + by}};
}

// The returned path really belongs to the class it claims.
void check_membership(const Environment& env, const RestrictedQuery& q, const RestrictedResult& res) {
  REQUIRE(res.path.has_value());
  const auto& path = *res.path;
  REQUIRE(path.front().x == q.J.a);
  REQUIRE(path.back().x == q.J.b);
  REQUIRE(in_tube(q.profile, q.r, path.front()));
  REQUIRE(in_tube(q.profile, q.r, path.back()));
  int count = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    REQUIRE_FALSE(q.p_edges.contains(EdgeKey::between(path[i - 1], path[i])));
    count += in_tube_slab(q.profile, q.r, q.J, path[i - 1]) && in_tube_slab(q.profile, q.r, q.J, path[i]);
  }
  REQUIRE(count >= q.J.half_length_ceil());
  REQUIRE(std::abs(path_time(env, path) - res.time) <= 1e-9);
  if (q.mode == HopBoundMode::enforced)
    REQUIRE(static_cast<std::int64_t>(path.length()) <= hop_limit(q, path.front(), path.back()));
}

}  // namespace

TEST_CASE("query validation") {
  const auto p = straight(0, 4, 0);
  CHECK_THROWS_AS(RestrictedQuery::from_path(p, {0, 5}, 1, 8, 2), std::invalid_argument);
  CHECK_THROWS_AS(RestrictedQuery::from_path(p, {0, 4}, 0, 8, 2), std::invalid_argument);
  CHECK_THROWS_AS(RestrictedQuery::from_path(p, {0, 4}, 1, 0, 2), std::invalid_argument);
  const auto q = RestrictedQuery::from_path(p, {0, 4}, 1, 2.0, 2.0);
  CHECK(q.p_edges.size() == 4);
  CHECK(hop_limit(q, {0, 0}, {4, 1}) == 10);
  CHECK(log_sq(1.0) == 0.0);
  CHECK(log_sq(std::exp(3.0)) == doctest::Approx(9.0));
}

TEST_CASE("degenerate interval") {
  Environment env(1, kU12);
  const auto q = RestrictedQuery::from_path(straight(0, 4, 0), {2, 2}, 1, 8, 2);
  const auto res = restricted_passage_time(env, q);
  CHECK(res.time == 0.0);
  CHECK(pioneer_passage_time(env, q.profile, {2, 2}) == 0.0);
}

TEST_CASE("matches exhaustive enumeration on small fixtures") {
  bool saw_elementary = false;
  for (int k = 0; k < 20; ++k) {
    CAPTURE(k);
    const auto c = oracle::restricted_case(k);
    const auto box = restricted_region(c.q);
    const auto res = restricted_passage_time(c.env, c.q);
    const double best = oracle::restricted_min(c.env, c.q, box, false);
    if (std::isinf(best)) {
      CHECK(std::isinf(res.time));
      CHECK_FALSE(res.feasible());
      continue;
    }
    REQUIRE(std::abs(res.time - best) <= 1e-9);
    check_membership(c.env, c.q, res);
    saw_elementary = saw_elementary || res.elementary_search;
  }
  CHECK(saw_elementary);
  CHECK(std::isinf(restricted_passage_time(oracle::restricted_case(19).env, oracle::restricted_case(19).q).time));
}

TEST_CASE("enforced mode matches enumeration with the hop bound") {
  for (int k = 0; k < 20; ++k) {
    CAPTURE(k);
    const auto c = oracle::restricted_case(k, HopBoundMode::enforced);
    const auto res = restricted_passage_time(c.env, c.q);
    // Searched well beyond the region: the hop bound alone keeps paths inside.
    const double best = oracle::restricted_min(c.env, c.q, widen(restricted_region(c.q), 3), true);
    if (std::isinf(best)) {
      CHECK(std::isinf(res.time));
      continue;
    }
    REQUIRE(std::abs(res.time - best) <= 1e-9);
    CHECK(res.hop_bound_ok);
    check_membership(c.env, c.q, res);
  }
}

TEST_CASE("result depends only on weights inside the region") {
  for (int k = 0; k < 20; ++k) {
    for (auto mode : {HopBoundMode::relaxed, HopBoundMode::enforced}) {
      const auto c = oracle::restricted_case(k, mode);
      const auto box = restricted_region(c.q);
      const auto res = restricted_passage_time(c.env, c.q);
      const auto other = restricted_passage_time(oracle::resample_outside(c.env, box, 7777 + k), c.q);
      REQUIRE(std::bit_cast<std::uint64_t>(res.time) == std::bit_cast<std::uint64_t>(other.time));
      REQUIRE(res.path == other.path);
    }
  }
}

TEST_CASE("relaxing constraints never increases the minimum") {
  std::mt19937_64 g(9);
  for (int k = 0; k < 20; ++k) {
    Environment env(500 + k, kU12);
    const auto p = geodesic(env, {0, 0}, {6, static_cast<int>(g() % 5) - 2}).path;
    const IntervalJ J{0, 6};
    double prev = oracle::kInf;
    for (int r = 1; r <= 3; ++r) {
      const auto q = RestrictedQuery::from_path(p, J, r, 2.0, 2.0, HopBoundMode::enforced);
      const double enforced = restricted_passage_time(env, q).time;
      auto qr = q;
      qr.mode = HopBoundMode::relaxed;
      const double relaxed = restricted_passage_time(env, qr).time;
      auto qw = q;
      qw.rho2 = 3.0;
      const double wider = restricted_passage_time(env, qw).time;
      REQUIRE(relaxed <= enforced);
      REQUIRE(wider <= enforced);
      REQUIRE(enforced <= prev);
      prev = enforced;
    }
  }
}

TEST_CASE("connection cost bound") {
  for (int k = 0; k < 19; ++k) {
    const auto c = oracle::restricted_case(k);
    const auto res = restricted_passage_time(c.env, c.q);
    REQUIRE(res.feasible());
    const double tp = pioneer_passage_time(c.env, c.q.profile, c.q.J);
    const double link = passage_time(c.env, c.q.profile.pioneer(c.q.J.a), res.path->front()) +
                        passage_time(c.env, res.path->back(), c.q.profile.pioneer(c.q.J.b));
    CHECK(tp <= res.time + link + 1e-9);
  }
}

TEST_CASE("pioneer passage times") {
  Environment c1(1, WeightDistribution::constant(1.0));
  const auto flat = pioneer_profile(straight(0, 5, 0));
  CHECK(pioneer_passage_time(c1, flat, {0, 5}) == 5.0);

  Environment env(12, kU12);
  std::mt19937_64 g(12);
  for (int i = 0; i < 20; ++i) {
    const auto p = geodesic(env, {0, 0}, {12, static_cast<int>(g() % 9) - 4}).path;
    const auto prof = pioneer_profile(p);
    const IntervalJ J{2, 9};
    // Compare against an arbitrary path through the same pioneer points.
    const auto sub = subpath_between(p, prof.pioneer(J.a), prof.pioneer(J.b));
    CHECK(pioneer_passage_time(env, prof, J) <= path_time(env, sub) + 1e-9);
    Environment other(900 + i, kU12);
    CHECK(pioneer_passage_time(other, prof, J) <= path_time(other, sub) + 1e-9);
  }
}

TEST_CASE("expected pioneer time") {
  const auto prof = pioneer_profile(LatticePath({{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 1}}));
  const auto c = expected_pioneer_time(WeightDistribution::constant(2.5), prof, {0, 3}, 20);
  CHECK(c.mean == 2.5 * 4);
  CHECK(c.std_err == 0.0);
  const auto d = expected_pioneer_time(kU12, prof, {1, 1}, 20);
  CHECK(d.mean == 0.0);
  CHECK(d.std_err == 0.0);

  const auto a = expected_pioneer_time(kU12, prof, {0, 3}, 10000, 1);
  const auto b = expected_pioneer_time(kU12, prof, {0, 3}, 10000, 2);
  CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.std_err, b.std_err));
  CHECK(expected_pioneer_time(kU12, prof, {0, 3}, 100, 5, 1).mean ==
        expected_pioneer_time(kU12, prof, {0, 3}, 100, 5, 4).mean);
}

TEST_CASE("deviation") {
  Environment c1(1, WeightDistribution::constant(1.5));
  const auto d = deviation(c1, straight(0, 8, 0), {1, 6}, 10);
  CHECK(d.deviation == 0.0);
  CHECK(d.subpath_time == 7.5);

  Environment env(3, kU12);
  const auto gamma = geodesic(env, {0, 0}, {32, 0}).path;
  const auto prof = pioneer_profile(gamma);
  const auto whole = deviation(env, gamma, {0, 32}, 400, 1);
  double sum = 0.0, var = whole.expected.std_err * whole.expected.std_err;
  for (int i = 0; i < 4; ++i) {
    const auto part = deviation(env, gamma, {8 * i, 8 * (i + 1)}, 400, 2 + i);
    // The deviation is never below the sampling noise of the expectation.
    const double tp = pioneer_passage_time(env, prof, {8 * i, 8 * (i + 1)});
    CHECK(part.deviation >= tp - part.expected.mean - 3.0 * part.expected.std_err);
    sum += part.deviation;
    var += part.expected.std_err * part.expected.std_err;
  }
  CHECK(sum <= whole.deviation + 3.0 * std::sqrt(var));
}

TEST_CASE("attractive intervals") {
  // Empty restricted class: always attractive.
  const auto c = oracle::restricted_case(19);
  AttractParams ap{c.q.r, 6.0, c.q.rho2, 2.0, HopBoundMode::relaxed};
  const LatticePath p19({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  CHECK(attractive_interval(c.env, p19, c.q.J, ap).attractive);

  // A cheap corridor next to p: not attractive.
  Overlay o;
  for (int x = -10; x < 20; ++x) o[{x, 1, Orientation::horizontal}] = 0.01;
  const auto env = Environment(4, kU12).with_overlay(o);
  const auto p = straight(0, 10, 0);
  AttractParams cheap{1, 0.5, 8.0, 2.0, HopBoundMode::relaxed};
  const auto res = attractive_interval(env, p, {0, 10}, cheap);
  CHECK_FALSE(res.attractive);
  CHECK(res.restricted_time < res.pioneer_time);

  // Raising rho1 only raises the threshold.
  Environment plain(6, kU12);
  const auto gamma = geodesic(plain, {0, 0}, {24, 0}).path;
  bool prev = true;
  for (double rho1 : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    AttractParams a{1, rho1, 8.0, 2.0, HopBoundMode::relaxed};
    const bool now = attractive_interval(plain, gamma, {4, 20}, a).attractive;
    if (!prev) CHECK_FALSE(now);
    prev = now;
  }
}
