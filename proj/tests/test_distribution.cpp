#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fpp/distribution.hpp"
#include "fpp/rng.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

namespace {

const double kPhi1 = 0.8413447460685429;  // normal table value

std::vector<double> coupled_sample(const WeightDistribution& d, std::size_t n, std::uint64_t seed) {
  GaussianCoupling c(d);
  rng::CounterStream s(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(c.h_inv(d.quantile(s.uniform())));
  return out;
}

}  // namespace

TEST_CASE("normal cdf and quantile") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.0) == doctest::Approx(kPhi1).epsilon(1e-14));
  CHECK(normal_cdf(-1.0) == doctest::Approx(1.0 - kPhi1).epsilon(1e-14));
  CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0));
  for (double x : {-8.0, -6.0, -2.5, -0.3, 0.0, 0.7}) CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
  CHECK(normal_quantile(1e-300) == doctest::Approx(-37.0471).epsilon(1e-5));
}

TEST_CASE("parse and spec round trip") {
  for (const char* s : {"const:2", "unif:1:2", "exp:1", "scaled:0.1:unif01", "scaled:0.25:unif:0:1", "gauss"}) {
    const auto d = WeightDistribution::parse(s);
    CHECK(WeightDistribution::parse(d.spec()).spec() == d.spec());
  }
  CHECK_THROWS_AS(WeightDistribution::parse("unif:2:1"), std::invalid_argument);
  CHECK_THROWS_AS(WeightDistribution::parse("exp:-1"), std::invalid_argument);
  CHECK_THROWS_AS(WeightDistribution::parse("banana"), std::invalid_argument);
  CHECK_THROWS_AS(WeightDistribution::parse("unif:1"), std::invalid_argument);
}

TEST_CASE("cdf, quantile and moments") {
  const auto u = WeightDistribution::uniform(1.0, 2.0);
  CHECK(u.mean() == 1.5);
  CHECK(u.variance() == doctest::Approx(1.0 / 12.0));
  CHECK(u.quantile(0.25) == 1.25);
  CHECK(u.cdf(1.75) == 0.75);
  CHECK(u.sf(1.75) == 0.25);

  const auto e = WeightDistribution::exponential(2.0);
  CHECK(e.mean() == 0.5);
  CHECK(e.upper_quantile(1e-300) == doctest::Approx(300 * std::log(10.0) / 2.0).epsilon(1e-12));
  for (double w : {0.01, 0.3, 2.0}) CHECK(e.quantile(e.cdf(w)) == doctest::Approx(w).epsilon(1e-12));
  for (double w : {2.0, 9.0, 200.0}) CHECK(e.upper_quantile(e.sf(w)) == doctest::Approx(w).epsilon(1e-12));

  const auto s = WeightDistribution::scaled_shifted(WeightDistribution::uniform(0.0, 1.0), 0.1);
  CHECK(s.support_lo() == 1.0);
  CHECK(s.support_hi() == doctest::Approx(1.1));
  CHECK(s.mean() == doctest::Approx(1.05));

  const auto c = WeightDistribution::constant(3.0);
  CHECK(c.quantile(0.1) == 3.0);
  CHECK_FALSE(c.atomless());
  CHECK(u.atomless());
  CHECK_FALSE(WeightDistribution::standard_gaussian().nonnegative());
}

TEST_CASE("coupling examples") {
  GaussianCoupling u01(WeightDistribution::uniform(0.0, 1.0));
  CHECK(u01.h(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(u01.h(1.0) == doctest::Approx(kPhi1).epsilon(1e-12));
  GaussianCoupling e1(WeightDistribution::exponential(1.0));
  CHECK(e1.h(0.0) == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
  CHECK_THROWS_AS(GaussianCoupling(WeightDistribution::constant(1.0)), std::domain_error);

  CHECK(perturb(u01, 0.5, 1.0, Direction::up) == doctest::Approx(kPhi1).epsilon(1e-12));
  CHECK(perturb(u01, 0.5, 1.0, Direction::down) == doctest::Approx(1.0 - kPhi1).epsilon(1e-12));
  for (double w : {0.001, 0.3, 0.5, 0.999}) {
    CHECK(perturb(u01, w, 0.0, Direction::up) == doctest::Approx(w).epsilon(1e-12));
    CHECK(perturb(u01, w, 0.0, Direction::down) == doctest::Approx(w).epsilon(1e-12));
  }
  CHECK_THROWS_AS(perturb(u01, 0.5, 1.5, Direction::up), std::domain_error);
  CHECK_THROWS_AS(perturb(u01, 1.5, 0.5, Direction::up), std::domain_error);

  GaussianCoupling g(WeightDistribution::standard_gaussian());
  CHECK(perturb(g, 0.25, 0.5, Direction::up) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(perturb(g, 0.25, 0.5, Direction::down) == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("coupled variates are standard normal") {
  const auto normal = [](double x) { return normal_cdf(x); };
  CHECK(ks_statistic(coupled_sample(WeightDistribution::uniform(1.0, 2.0), 100000, 1), normal) < 0.01);
  CHECK(ks_statistic(coupled_sample(WeightDistribution::exponential(1.0), 100000, 2), normal) < 0.01);
}

TEST_CASE("perturbation is monotone in w and sigma") {
  for (const auto& d : {WeightDistribution::uniform(1.0, 2.0), WeightDistribution::exponential(1.0)}) {
    GaussianCoupling c(d);
    double prev_up = -1.0, prev_dn = -1.0;
    for (int i = 1; i <= 1000; ++i) {
      const double w = d.quantile(i / 1001.0);
      const double up = perturb(c, w, 0.5, Direction::up);
      const double dn = perturb(c, w, 0.5, Direction::down);
      REQUIRE(up >= w);
      REQUIRE(dn <= w);
      REQUIRE(up >= prev_up);
      REQUIRE(dn >= prev_dn);
      REQUIRE(perturb(c, w, 0.8, Direction::up) >= up);
      REQUIRE(perturb(c, w, 0.8, Direction::down) <= dn);
      REQUIRE(perturb(c, up, 0.5, Direction::down) == doctest::Approx(w).epsilon(1e-9));
      prev_up = up;
      prev_dn = dn;
    }
  }
}
