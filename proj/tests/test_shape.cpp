#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fpp/geodesic.hpp"
#include "fpp/shape.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

namespace {

const auto kU12 = WeightDistribution::uniform(1.0, 2.0);
const auto kU01 = WeightDistribution::uniform(0.0, 1.0);

}  // namespace

TEST_CASE("scaled_floor") {
  CHECK(scaled_floor({1.0, 0.0}, 64) == Vertex{64, 0});
  CHECK(scaled_floor({0.5, -0.25}, 10) == Vertex{5, -3});
}

TEST_CASE("time constant in constant environments") {
  const auto c = WeightDistribution::constant(1.5);
  const auto axis = time_constant(c, {1.0, 0.0}, 40, 5, 1);
  CHECK(axis.estimate.mean == 1.5);
  CHECK(axis.estimate.std_err == 0.0);
  const auto diag = time_constant(c, {1.0, 1.0}, 33, 5, 1);
  CHECK(diag.estimate.mean == 3.0);
  CHECK(diag.target == Vertex{33, 33});
}

TEST_CASE("time constant estimates decrease with n") {
  const auto a = time_constant(kU12, {1.0, 0.0}, 64, 300, 11);
  const auto b = time_constant(kU12, {1.0, 0.0}, 128, 300, 12);
  CHECK(b.estimate.mean <= a.estimate.mean + 3.0 * std::hypot(a.estimate.std_err, b.estimate.std_err));
  CHECK(a.estimate.mean < kU12.mean());
}

TEST_CASE("constant metric ball is the diamond") {
  Environment c1(1, WeightDistribution::constant(1.0));
  for (double t : {10.0, 30.0}) CHECK(hausdorff_to_l1_diamond(metric_ball(c1, t), t) <= 2.0 / t);
  const auto s = shape_boundary(WeightDistribution::constant(1.0), 30.0, 2, 1);
  CHECK(hausdorff_to_l1_sphere(s.polygon()) <= 2.0 / 30.0);
  CHECK(s.reflection_gap == 0.0);
}

TEST_CASE("hausdorff helpers") {
  const std::vector<Vec2> a{{0, 0}, {1, 0}};
  const std::vector<Vec2> b{{0, 0}, {1, 0}, {1, 2}};
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff(a, b) == doctest::Approx(2.0));
  CHECK_THROWS_AS(hausdorff({}, a), std::invalid_argument);
  // The sphere point (-1/2, -1/2) is farthest from these five points.
  CHECK(hausdorff_to_l1_sphere({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {0.5, 0.5}}) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(0.01));
}

TEST_CASE("boundary is symmetric under reflection") {
  const auto s = shape_boundary(kU12, 20.0, 200, 3);
  const auto bins = static_cast<int>(s.bins.size());
  int compared = 0, outside = 0;
  for (int k = 1; k < bins / 2; ++k) {
    const auto& a = s.bins[static_cast<std::size_t>(k)];
    const auto& b = s.bins[static_cast<std::size_t>(bins - k)];
    if (a.hits < 200 || b.hits < 200) continue;
    ++compared;
    outside += std::abs(a.radius - b.radius) >= 3.0 * std::hypot(a.std_err, b.std_err);
  }
  CHECK(compared > 50);
  // Per-bin 3-sigma agreement; a handful of exceptions is the expected tail.
  CHECK(outside <= compared / 20 + 1);
  CHECK(s.reflection_gap_sigmas > 0.0);
}

TEST_CASE("boundaries converge as t grows") {
  const auto b10 = shape_boundary(kU12, 10.0, 60, 5).polygon();
  const auto b20 = shape_boundary(kU12, 20.0, 60, 6).polygon();
  const auto b40 = shape_boundary(kU12, 40.0, 60, 7).polygon();
  CHECK(hausdorff(b20, b40) < hausdorff(b10, b40));
}

TEST_CASE("flat edge test") {
  const auto c = flat_edge_test(WeightDistribution::constant(1.0), {1.0, 0.0}, {1.0, 1.0}, 32, 4, 1);
  CHECK(c.delta.mean == 0.0);
  CHECK(c.verdict == FlatEdgeVerdict::consistent_with_flat);
  CHECK(to_string(c.verdict) == "consistent-with-flat");
  CHECK(to_string(FlatEdgeVerdict::strictly_convex) == "strictly-convex");

  const auto polar = flat_edge_test(WeightDistribution::constant(1.0), 0.0, std::numbers::pi / 4, 1.0, std::sqrt(2.0),
                                    32, 4, 1);
  CHECK(polar.lattice_b == Vertex{32, 32});
  CHECK(polar.delta.mean == 0.0);

  for (std::uint64_t seed : {1, 2, 3}) {
    const auto r = flat_edge_test(kU12, {1.0, 0.0}, {0.0, 1.0}, 24, 60, seed);
    CHECK(r.delta.mean >= -3.0 * r.delta.std_err);
  }
}

TEST_CASE("l-infinity bound") {
  const auto c = linf_bound_check(WeightDistribution::constant(2.0), {3.0, 1.0}, 8, 3, 1);
  CHECK(c.holds);
  CHECK(c.margin.mean == doctest::Approx(2.0));
  const auto axis = linf_bound_check(kU12, {1.0, 0.0}, 32, 50, 2);
  CHECK(axis.margin.mean == 0.0);
  const auto r = linf_bound_check(kU12, {2.0, 1.0}, 64, 500, 3);
  CHECK(r.holds);
}

TEST_CASE("staircase bound") {
  const auto tiny = staircase_bound(kU01, 1e-9, 1.0 / 16, 1000, 1);
  CHECK(tiny.gap == doctest::Approx(0.0).epsilon(1e-6).scale(1.0));
  CHECK(tiny.M == 17);
  CHECK(tiny.lemma_regime);

  const auto r = staircase_bound(kU01, 0.1, 1.0 / 16, 100000, 2);
  CHECK_FALSE(r.lemma_regime);
  // Direct estimate: gap = eps * E|S1 - S2| / 2 with S1, S2 sums of 17 uniforms.
  std::mt19937_64 g(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> d;
  d.reserve(1000000);
  for (int i = 0; i < 1000000; ++i) {
    double s1 = 0.0, s2 = 0.0;
    for (int k = 0; k < 17; ++k) {
      s1 += u(g);
      s2 += u(g);
    }
    d.push_back(0.1 * std::abs(s1 - s2) / 2.0);
  }
  const auto ref = estimate(d);
  CHECK(std::abs(r.gap - ref.mean) <= 3.0 * std::hypot(r.std_err, ref.std_err));

  CHECK_THROWS_AS(staircase_bound(kU01, 0.1, 0.3, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(staircase_bound(kU12, 0.1, 0.25, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(staircase_bound(kU01, 0.0, 0.25, 100, 1), std::invalid_argument);
}

TEST_CASE("berry probe") {
  const auto zero = berry_probe(kU01, 2, 100000, 1);
  CHECK(zero.estimate.successes == 0);
  CHECK(zero.estimate.wilson.lo == 0.0);

  const auto a = berry_probe(kU01, 100, 400000, 2);
  const auto b = berry_probe(kU01, 400, 400000, 3);
  CHECK(std::abs(a.estimate.p - b.estimate.p) <= 3.0 * std::hypot(a.estimate.std_err, b.estimate.std_err));
  CHECK(a.threshold == doctest::Approx(100 * 0.5 - 10.0));
  CHECK(berry_probe(kU01, 100, 10000, 4, 1).estimate.successes == berry_probe(kU01, 100, 10000, 4, 3).estimate.successes);
}

TEST_CASE("sides schedule and witness") {
  CHECK(sides_schedule(0.05).empty());
  const auto s = sides_schedule(1e-30);
  REQUIRE(s.size() == 2);
  const double l = std::log(1e30);
  CHECK(s[0] == doctest::Approx(1e-30 * std::pow(l, 3)));
  CHECK(s[1] == doctest::Approx(1e-30 * std::pow(l, 6)));

  const auto empty = sides_witness(0.05, {}, 16, 10, 1);
  CHECK(empty.results.empty());
  CHECK(empty.strictly_convex == 0);
  CHECK_THROWS_AS(sides_witness(0.05, {}, 16, 10, 1, 0, WeightDistribution::constant(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(sides_witness(0.05, {{0.2, 0.25}}, 16, 10, 1), std::invalid_argument);

  const auto w = sides_witness(0.001, {{0.005, 0.8}}, 24, 20, 1);
  REQUIRE(w.results.size() == 1);
  CHECK(w.results[0].lattice_a == Vertex{24, 0});
}
