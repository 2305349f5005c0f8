#include "fpp/stats.hpp"

#include <algorithm>
#include <stdexcept>

#include "fpp/parallel.hpp"

namespace fpp {

int default_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const auto half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate estimate(std::span<const double> values) {
  Estimate e;
  e.n = values.size();
  if (e.n == 0) return e;
  e.mean = pairwise_sum(values) / static_cast<double>(e.n);
  if (e.n < 2) return e;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
  e.stdev = std::sqrt(pairwise_sum(sq) / static_cast<double>(e.n - 1));
  e.std_err = e.stdev / std::sqrt(static_cast<double>(e.n));
  return e;
}

Interval wilson_interval(std::size_t successes, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // The bounds are exactly 0 and 1 at the extremes; rounding would leave dust.
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == n ? 1.0 : std::min(1.0, centre + half)};
}

Proportion proportion(std::size_t successes, std::size_t n) {
  Proportion out;
  out.successes = successes;
  out.n = n;
  if (n == 0) return out;
  out.p = static_cast<double>(successes) / static_cast<double>(n);
  out.std_err = std::sqrt(out.p * (1.0 - out.p) / static_cast<double>(n));
  out.wilson = wilson_interval(successes, n);
  return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ols_slope: need >= 2 paired points");
  const auto ex = estimate(x), ey = estimate(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - ex.mean) * (y[i] - ey.mean);
    sxx += (x[i] - ex.mean) * (x[i] - ex.mean);
  }
  if (sxx == 0.0) throw std::invalid_argument("ols_slope: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace fpp
