#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fpp {

/// Mean with standard error of the mean.
struct Estimate {
  double mean = 0.0;
  double std_err = 0.0;
  double stdev = 0.0;
  std::size_t n = 0;
};

/// Pairwise summation; the result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

Estimate estimate(std::span<const double> values);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

/// Binomial proportion with normal-approximation standard error.
struct Proportion {
  std::size_t successes = 0;
  std::size_t n = 0;
  double p = 0.0;
  double std_err = 0.0;
  Interval wilson;
};

Proportion proportion(std::size_t successes, std::size_t n);

/// Kolmogorov-Smirnov statistic of `samples` against a continuous CDF. Sorts a copy.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Least-squares slope of y against x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace fpp
