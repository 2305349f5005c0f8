#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

namespace fpp {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile for p in (0, 1). Uses the lower tail for p > 1/2.
double normal_quantile(double p);

class WeightDistribution;

struct ConstantDist {
  double value;
};

struct UniformDist {
  double lo;
  double hi;
};

struct ExponentialDist {
  double rate;
};

/// 1 + epsilon * X with X distributed as `base` (supported in [0, 1]).
struct ScaledShiftedDist {
  std::shared_ptr<const WeightDistribution> base;
  double epsilon;
};

/// Standard Gaussian. Only meant for coupling and Mermin-Wagner checks; it is
/// rejected as an edge-weight law because it charges negative values.
struct StandardGaussianDist {};

/// Parametric edge-weight law with CDF, survival function, quantiles and moments.
///
/// Every variant except Constant has a continuous, strictly increasing CDF on
/// its support, so quantile(cdf(w)) == w there (up to rounding).
class WeightDistribution {
 public:
  using Variant =
      std::variant<ConstantDist, UniformDist, ExponentialDist, ScaledShiftedDist, StandardGaussianDist>;

  static WeightDistribution constant(double c);
  static WeightDistribution uniform(double lo, double hi);
  static WeightDistribution exponential(double rate);
  static WeightDistribution scaled_shifted(const WeightDistribution& base, double epsilon);
  static WeightDistribution standard_gaussian();

  /// Parses `const:C`, `unif:A:B`, `exp:RATE`, `scaled:EPS:unif01`,
  /// `scaled:EPS:unif:A:B` and `gauss`. Throws std::invalid_argument.
  static WeightDistribution parse(std::string_view spec);

  /// Canonical spec string; parse(spec()) reproduces the distribution.
  std::string spec() const;

  const Variant& variant() const noexcept { return v_; }
  bool is_constant() const noexcept { return std::holds_alternative<ConstantDist>(v_); }
  bool is_gaussian() const noexcept { return std::holds_alternative<StandardGaussianDist>(v_); }

  double cdf(double w) const;
  double sf(double w) const;
  /// Inverse CDF for u in (0, 1).
  double quantile(double u) const;
  /// The w with sf(w) == q, for q in (0, 1). Accurate deep in the upper tail.
  double upper_quantile(double q) const;

  double mean() const;
  double variance() const;

  double support_lo() const;
  double support_hi() const;
  bool in_support_interior(double w) const;

  // Capability flags.
  bool atomless() const noexcept { return !is_constant(); }
  bool has_exponential_moment() const noexcept { return true; }
  bool nonnegative() const;

 private:
  explicit WeightDistribution(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Quantile coupling h = quantile o Phi mapping the standard Gaussian onto `dist`.
class GaussianCoupling {
 public:
  /// Throws std::domain_error for Constant distributions.
  explicit GaussianCoupling(WeightDistribution dist);

  const WeightDistribution& dist() const noexcept { return dist_; }

  double h(double x) const;
  /// Inverse of h on the support interior.
  double h_inv(double w) const;

 private:
  WeightDistribution dist_;
};

enum class Direction { up, down };

/// g^{+/-}_sigma(w) = h(h_inv(w) +/- sigma). Throws std::domain_error when w is
/// outside the support interior or sigma is outside [0, 1].
double perturb(const GaussianCoupling& c, double w, double sigma, Direction dir);

}  // namespace fpp
