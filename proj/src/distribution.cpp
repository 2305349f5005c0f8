#include "fpp/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

namespace fpp {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("bad number '" + std::string(s) + "' in distribution spec '" +
                                std::string(whole) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt_num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    throw std::domain_error("normal_quantile: p outside [0, 1]");
  }
  if (p > 0.5) return -normal_quantile(1.0 - p);
  // Evaluated in double; the default policy promotes to long double.
  using NoPromote = boost::math::policies::policy<boost::math::policies::promote_double<false>>;
  return -kSqrt2 * boost::math::erfc_inv(2.0 * p, NoPromote());
}

WeightDistribution WeightDistribution::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("constant weight must be finite and >= 0");
  return WeightDistribution(ConstantDist{c});
}

WeightDistribution WeightDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi) || !std::isfinite(hi))
    throw std::invalid_argument("uniform weights need 0 <= lo < hi");
  return WeightDistribution(UniformDist{lo, hi});
}

WeightDistribution WeightDistribution::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential rate must be > 0");
  return WeightDistribution(ExponentialDist{rate});
}

WeightDistribution WeightDistribution::scaled_shifted(const WeightDistribution& base, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be > 0");
  if (base.is_gaussian() || base.support_lo() < 0.0 || base.support_hi() > 1.0)
    throw std::invalid_argument("scaled-shifted base must be supported in [0, 1]");
  return WeightDistribution(ScaledShiftedDist{std::make_shared<const WeightDistribution>(base), epsilon});
}

WeightDistribution WeightDistribution::standard_gaussian() { return WeightDistribution(StandardGaussianDist{}); }

WeightDistribution WeightDistribution::parse(std::string_view spec) {
  auto parts = split(spec, ':');
  const auto& kind = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n) throw std::invalid_argument("malformed distribution spec '" + std::string(spec) + "'");
  };
  if (kind == "const") {
    need(2);
    return constant(parse_number(parts[1], spec));
  }
  if (kind == "unif") {
    need(3);
    return uniform(parse_number(parts[1], spec), parse_number(parts[2], spec));
  }
  if (kind == "exp") {
    need(2);
    return exponential(parse_number(parts[1], spec));
  }
  if (kind == "gauss") {
    need(1);
    return standard_gaussian();
  }
  if (kind == "scaled") {
    if (parts.size() < 3) need(3);
    double eps = parse_number(parts[1], spec);
    auto rest = spec.substr(spec.find(':', spec.find(':') + 1) + 1);
    if (rest == "unif01") return scaled_shifted(uniform(0.0, 1.0), eps);
    return scaled_shifted(parse(rest), eps);
  }
  throw std::invalid_argument("unknown distribution kind in '" + std::string(spec) + "'");
}

std::string WeightDistribution::spec() const {
  return std::visit(overloaded{
                        [](const ConstantDist& d) { return "const:" + fmt_num(d.value); },
                        [](const UniformDist& d) { return "unif:" + fmt_num(d.lo) + ":" + fmt_num(d.hi); },
                        [](const ExponentialDist& d) { return "exp:" + fmt_num(d.rate); },
                        [](const ScaledShiftedDist& d) {
                          auto base = d.base->spec();
                          if (base == "unif:0:1") base = "unif01";
                          return "scaled:" + fmt_num(d.epsilon) + ":" + base;
                        },
                        [](const StandardGaussianDist&) { return std::string("gauss"); },
                    },
                    v_);
}

double WeightDistribution::cdf(double w) const {
  return std::visit(overloaded{
                        [&](const ConstantDist& d) { return w >= d.value ? 1.0 : 0.0; },
                        [&](const UniformDist& d) { return std::clamp((w - d.lo) / (d.hi - d.lo), 0.0, 1.0); },
                        [&](const ExponentialDist& d) { return w <= 0.0 ? 0.0 : -std::expm1(-d.rate * w); },
                        [&](const ScaledShiftedDist& d) { return d.base->cdf((w - 1.0) / d.epsilon); },
                        [&](const StandardGaussianDist&) { return normal_cdf(w); },
                    },
                    v_);
}

double WeightDistribution::sf(double w) const {
  return std::visit(overloaded{
                        [&](const ConstantDist& d) { return w >= d.value ? 0.0 : 1.0; },
                        [&](const UniformDist& d) { return std::clamp((d.hi - w) / (d.hi - d.lo), 0.0, 1.0); },
                        [&](const ExponentialDist& d) { return w <= 0.0 ? 1.0 : std::exp(-d.rate * w); },
                        [&](const ScaledShiftedDist& d) { return d.base->sf((w - 1.0) / d.epsilon); },
                        [&](const StandardGaussianDist&) { return normal_cdf(-w); },
                    },
                    v_);
}

double WeightDistribution::quantile(double u) const {
  return std::visit(overloaded{
                        [&](const ConstantDist& d) { return d.value; },
                        [&](const UniformDist& d) { return d.lo + u * (d.hi - d.lo); },
                        [&](const ExponentialDist& d) { return -std::log1p(-u) / d.rate; },
                        [&](const ScaledShiftedDist& d) { return 1.0 + d.epsilon * d.base->quantile(u); },
                        [&](const StandardGaussianDist&) { return normal_quantile(u); },
                    },
                    v_);
}

double WeightDistribution::upper_quantile(double q) const {
  return std::visit(overloaded{
                        [&](const ConstantDist& d) { return d.value; },
                        [&](const UniformDist& d) { return d.hi - q * (d.hi - d.lo); },
                        [&](const ExponentialDist& d) { return -std::log(q) / d.rate; },
                        [&](const ScaledShiftedDist& d) { return 1.0 + d.epsilon * d.base->upper_quantile(q); },
                        [&](const StandardGaussianDist&) { return -normal_quantile(q); },
                    },
                    v_);
}

double WeightDistribution::mean() const {
  return std::visit(overloaded{
                        [](const ConstantDist& d) { return d.value; },
                        [](const UniformDist& d) { return 0.5 * (d.lo + d.hi); },
                        [](const ExponentialDist& d) { return 1.0 / d.rate; },
                        [](const ScaledShiftedDist& d) { return 1.0 + d.epsilon * d.base->mean(); },
                        [](const StandardGaussianDist&) { return 0.0; },
                    },
                    v_);
}

double WeightDistribution::variance() const {
  return std::visit(overloaded{
                        [](const ConstantDist&) { return 0.0; },
                        [](const UniformDist& d) { return (d.hi - d.lo) * (d.hi - d.lo) / 12.0; },
                        [](const ExponentialDist& d) { return 1.0 / (d.rate * d.rate); },
                        [](const ScaledShiftedDist& d) { return d.epsilon * d.epsilon * d.base->variance(); },
                        [](const StandardGaussianDist&) { return 1.0; },
                    },
                    v_);
}

double WeightDistribution::support_lo() const {
  return std::visit(overloaded{
                        [](const ConstantDist& d) { return d.value; },
                        [](const UniformDist& d) { return d.lo; },
                        [](const ExponentialDist&) { return 0.0; },
                        [](const ScaledShiftedDist& d) { return 1.0 + d.epsilon * d.base->support_lo(); },
                        [](const StandardGaussianDist&) { return -kInf; },
                    },
                    v_);
}

double WeightDistribution::support_hi() const {
  return std::visit(overloaded{
                        [](const ConstantDist& d) { return d.value; },
                        [](const UniformDist& d) { return d.hi; },
                        [](const ExponentialDist&) { return kInf; },
                        [](const ScaledShiftedDist& d) { return 1.0 + d.epsilon * d.base->support_hi(); },
                        [](const StandardGaussianDist&) { return kInf; },
                    },
                    v_);
}

bool WeightDistribution::in_support_interior(double w) const {
  return std::isfinite(w) && w > support_lo() && w < support_hi();
}

bool WeightDistribution::nonnegative() const { return support_lo() >= 0.0; }

GaussianCoupling::GaussianCoupling(WeightDistribution dist) : dist_(std::move(dist)) {
  if (dist_.is_constant()) throw std::domain_error("Gaussian coupling needs an atomless distribution");
}

double GaussianCoupling::h(double x) const {
  if (dist_.is_gaussian()) return x;
  // Evaluate from whichever tail keeps the probability away from 1.
  return x <= 0.0 ? dist_.quantile(normal_cdf(x)) : dist_.upper_quantile(normal_cdf(-x));
}

double GaussianCoupling::h_inv(double w) const {
  if (dist_.is_gaussian()) return w;
  const double c = dist_.cdf(w);
  return c <= 0.5 ? normal_quantile(c) : -normal_quantile(dist_.sf(w));
}

double perturb(const GaussianCoupling& c, double w, double sigma, Direction dir) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw std::domain_error("perturb: sigma outside [0, 1]");
  if (!c.dist().in_support_interior(w)) throw std::domain_error("perturb: weight outside the support interior");
  if (sigma == 0.0) return w;
  const double x = c.h_inv(w);
  // g+ >= w and g- <= w hold exactly; the clamp only absorbs rounding.
  if (dir == Direction::up) return std::max(w, c.h(x + sigma));
  return std::min(w, c.h(x - sigma));
}

}  // namespace fpp
