#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "fpp/rng.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

TEST_CASE("mix64 and derived seeds") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(rng::mix64(i));
  CHECK(seen.size() == 10000);

  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(rng::derive_seed(7, i));
  CHECK(seeds.size() == 1000);
  CHECK(rng::derive_seed(7, 3) == rng::derive_seed(7, 3));
  CHECK(rng::derive_seed(7, 3) != rng::derive_seed(8, 3));
}

TEST_CASE("unit_open stays strictly inside (0, 1)") {
  CHECK(rng::unit_open(0) > 0.0);
  CHECK(rng::unit_open(~0ULL) < 1.0);
  rng::CounterStream s(5);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("counter streams are reproducible") {
  rng::CounterStream a(11), b(11), c(12);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
  }
}

TEST_CASE("pairwise_sum") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(pairwise_sum(v) == 500500.0);
  CHECK(pairwise_sum({}) == 0.0);
  // 1 + many tiny terms: pairwise keeps far more of them than naive left-to-right.
  std::vector<double> w(1 << 20, 1e-16);
  w[0] = 1.0;
  CHECK(pairwise_sum(w) == doctest::Approx(1.0 + 1e-16 * ((1 << 20) - 1)).epsilon(1e-15));
}

TEST_CASE("estimate") {
  const std::vector<double> c(10, 3.0);
  const auto e = estimate(c);
  CHECK(e.mean == 3.0);
  CHECK(e.std_err == 0.0);
  CHECK(e.n == 10);

  const std::vector<double> v{1, 2, 3, 4};
  const auto f = estimate(v);
  CHECK(f.mean == doctest::Approx(2.5));
  CHECK(f.stdev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(f.std_err == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("wilson interval") {
  const auto z = wilson_interval(0, 100);
  CHECK(z.lo == 0.0);
  CHECK(z.hi > 0.0);
  CHECK(z.hi < 0.05);
  const auto all = wilson_interval(100, 100);
  CHECK(all.hi == doctest::Approx(1.0));
  // Reference value for 10 / 100 at 95%.
  const auto w = wilson_interval(10, 100);
  CHECK(w.lo == doctest::Approx(0.05522).epsilon(1e-3));
  CHECK(w.hi == doctest::Approx(0.17437).epsilon(1e-3));

  const auto p = proportion(10, 100);
  CHECK(p.p == doctest::Approx(0.1));
  CHECK(p.std_err == doctest::Approx(0.03));
}

TEST_CASE("ks statistic") {
  const auto uni = [](double x) { return std::clamp(x, 0.0, 1.0); };
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back((i + 0.5) / 1000.0);
  CHECK(ks_statistic(grid, uni) == doctest::Approx(0.0005));
  std::vector<double> shifted;
  for (double g : grid) shifted.push_back(g * 0.5);
  CHECK(ks_statistic(shifted, uni) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("ols slope") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{3, 5, 7, 9, 11};
  CHECK(ols_slope(x, y) == doctest::Approx(2.0));
}
