#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpp/distribution.hpp"
#include "fpp/environment.hpp"
#include "fpp/lattice.hpp"
#include "fpp/restricted.hpp"
#include "fpp/stats.hpp"

namespace fpp {

inline constexpr const char* kReportFormat = "fpp-report/1";

struct Statistic {
  std::string name;
  double value = 0.0;
  double std_err = 0.0;
  Interval interval;  // Wilson for proportions, mean +- 1.96 se otherwise
  std::size_t n = 0;
};

struct Gate {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Output of a Monte-Carlo harness. Rows depend only on the configuration, so
/// the CSV is byte-identical across worker counts; timing lives in counters.
struct ExperimentReport {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Statistic> aggregates;
  std::vector<Gate> gates;
  std::vector<std::pair<std::string, double>> counters;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  bool passed() const;
  /// Throws std::out_of_range for an unknown name.
  const Statistic& aggregate(const std::string& name) const;
};

struct RunConfig {
  WeightDistribution dist = WeightDistribution::uniform(1.0, 2.0);
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  int workers = 0;
};

struct CoalescenceParams {
  Vertex y{64, 0};
  double epsilon = 1.0 / 17.0;
  double delta = 0.0;
  int random_pairs = 16;
};

/// ell = floor(|y|_1^(1/8 - epsilon)).
std::int32_t coalescence_ell(Vertex y, double epsilon);

/// Per trial: max over sampled endpoint quadruples (u, z in Lambda_ell,
/// v, w in y + Lambda_ell) of |gamma(u, v) symmetric-difference gamma(z, w)|,
/// and whether it exceeds |y|^(1 - delta) / 2. The max is a sampled lower
/// bound on the supremum.
ExperimentReport coalescence_experiment(const RunConfig& cfg, const CoalescenceParams& p);

struct MidpointParams {
  Vertex u{0, 0};
  Vertex v{64, 0};
  Vertex z{32, 0};
  /// Translates w range over Lambda_ell for the averaged estimator.
  std::int32_t ell = 1;
};

/// D_z^{u,v} = min(|u - z|_1, |v - z|_1).
std::int64_t midpoint_distance(Vertex u, Vertex v, Vertex z);

ExperimentReport midpoint_experiment(const RunConfig& cfg, const MidpointParams& p);

struct AttractivenessParams {
  std::int32_t L = 256;
  std::int32_t s = 0;
  std::int32_t m = 16;
  std::int32_t N = 16;
  std::int32_t r = 2;
  double xi = 0.1;
  double rho = 4.0;    // bounded-slope constant
  double rho1 = -1.0;  // <= 0 selects 4 * mean(dist)
  double rho2 = 8.0;
  HopBoundMode mode = HopBoundMode::relaxed;
};

/// a_i = floor(i L / N); throws std::invalid_argument unless every piece has
/// length in [m, 2m].
std::vector<IntervalJ> partition_intervals(std::int32_t L, std::int32_t N, std::int32_t m);

ExperimentReport attractiveness_diagnostic(const RunConfig& cfg, const AttractivenessParams& p);

struct WrongDirectionParams {
  std::int32_t n = 256;
  double theta_u = 3.0 * 3.14159265358979323846 / 8.0;
  double theta0 = 0.0;
  std::vector<double> thresholds{20.0};
};

/// Largest Euclidean radius of a geodesic vertex v with |arg v| >= theta_u.
double wrong_direction_radius(const LatticePath& gamma, double theta_u);

ExperimentReport wrong_direction_probe(const RunConfig& cfg, const WrongDirectionParams& p);

struct TailParams {
  std::vector<std::int32_t> distances{16, 32, 64};
  double exceedance = 1e-3;
};

/// Tail diagnostics of T(0, (d, 0)) / d, |gamma| / d and |T - mean| / sqrt(d).
ExperimentReport tail_fit(const RunConfig& cfg, const TailParams& p);

struct MwGaussianResult {
  double p_a = 0.0;
  double p_plus = 0.0;   // P(X in A + tau)
  double p_minus = 0.0;  // P(X in A - tau)
  double lhs = 0.0;      // sqrt(p_plus p_minus)
  double rhs = 0.0;      // exp(-|tau|^2 / 2) p_a
  bool holds = false;
};

/// Closed form for a product box A (bounds may be infinite), dimension <= 4.
MwGaussianResult mw_check_gaussian(std::span<const double> tau, std::span<const Interval> box);

struct MwGeneralResult {
  Proportion p_a;
  Proportion p_plus;   // P(T+ A), via the event at g-(w)
  Proportion p_minus;  // P(T- A), via the event at g+(w)
  double factor = 1.0;  // exp(-|tau|^2 / 2)
  double margin = 0.0;  // sqrt(p_plus p_minus) - factor p_a
  double std_err = 0.0;  // bootstrap standard error of the margin
  bool holds = false;    // margin >= -3 std_err
  std::size_t trials = 0;
  /// Per trial: event at w, at g-(w) (T+ A) and at g+(w) (T- A).
  std::vector<std::array<bool, 3>> outcomes;
};

inline constexpr std::size_t kMwMinTrials = 10'000;

/// Weight-vector form: w_k = quantile(u_k) with shared per-trial variates;
/// the same w is evaluated unshifted and through the coordinatewise maps.
MwGeneralResult mw_check_general(const WeightDistribution& dist, std::span<const double> tau,
                                 const std::function<bool(std::span<const double>)>& event, std::size_t trials,
                                 std::uint64_t seed, int workers = 0, std::size_t bootstrap = 400);

/// Environment form: tau is an edge map, the event reads an environment.
MwGeneralResult mw_check_environment(const WeightDistribution& dist, const ShiftMap& tau,
                                     const std::function<bool(const Environment&)>& event, std::size_t trials,
                                     std::uint64_t seed, int workers = 0, std::size_t bootstrap = 400);

/// sigma on every edge with both endpoints in the box.
ShiftMap uniform_shift(const SearchBox& box, double sigma);

ExperimentReport to_report(const MwGaussianResult& r);
ExperimentReport to_report(const MwGeneralResult& r);

}  // namespace fpp
