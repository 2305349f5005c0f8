#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fpp/distribution.hpp"
#include "fpp/lattice.hpp"
#include "fpp/stats.hpp"

namespace fpp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Lattice point floor(n * dir), componentwise.
Vertex scaled_floor(Vec2 dir, double n);

/// Monte-Carlo estimate of T(0, floor(n * direction)) / n.
struct DirectionProbe {
  Vec2 direction;
  std::int32_t n = 0;
  std::size_t trials = 0;
  Vertex target;
  Estimate estimate;
  std::vector<double> samples;  // T(0, target) / n per trial
};

DirectionProbe time_constant(const WeightDistribution& dist, Vec2 direction, std::int32_t n, std::size_t trials,
                             std::uint64_t seed, int workers = 0);

struct BoundaryBin {
  double theta = 0.0;
  double radius = 0.0;  // mean over trials of the normalised exit radius at theta
  double std_err = 0.0;
  std::size_t hits = 0;  // trials contributing
};

/// Radial function of (B(t) + [-1/2, 1/2]^2) / t at the bin centres, averaged
/// over independent environments.
struct ShapeEstimate {
  double t = 0.0;
  std::vector<BoundaryBin> bins;
  std::vector<std::uint64_t> seeds;
  /// Largest |r(theta) - r(-theta)| over bins hit in every trial, and the same
  /// difference in units of the combined bin standard error.
  double reflection_gap = 0.0;
  double reflection_gap_sigmas = 0.0;

  /// Boundary points (r cos theta, r sin theta); empty bins are filled by
  /// angular interpolation between the nearest hit bins.
  std::vector<Vec2> polygon() const;
};

inline constexpr int kShapeBins = 256;

ShapeEstimate shape_boundary(const WeightDistribution& dist, double t, std::size_t trials, std::uint64_t seed,
                             int workers = 0, int bins = kShapeBins);

/// Hausdorff distance between two finite point sets.
double hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

/// Hausdorff distance between {v / t : v in ball} and the filled unit l1 ball.
double hausdorff_to_l1_diamond(const std::vector<Vertex>& ball, double t);

/// Hausdorff distance between a boundary polygon and the unit l1 sphere.
double hausdorff_to_l1_sphere(const std::vector<Vec2>& polygon);

enum class FlatEdgeVerdict { consistent_with_flat, strictly_convex, inconclusive };
std::string to_string(FlatEdgeVerdict v);

/// Delta = mu(a) + mu(b) - mu(a + b) estimated with common random numbers:
/// each trial measures T(0, A), T(0, B) and T(0, A + B) in one environment,
/// A = floor(n a), B = floor(n b).
struct FlatEdgeResult {
  Vec2 a;
  Vec2 b;
  Vertex lattice_a;
  Vertex lattice_b;
  Estimate mu_a;
  Estimate mu_b;
  Estimate mu_sum;
  Estimate delta;
  FlatEdgeVerdict verdict = FlatEdgeVerdict::inconclusive;
  std::vector<std::array<double, 3>> samples;  // T(0, A) / n, T(0, B) / n, T(0, A + B) / n per trial
};

/// strictly_convex when Delta > 3 stderr, consistent_with_flat when |Delta| <= stderr.
FlatEdgeResult flat_edge_test(const WeightDistribution& dist, Vec2 a, Vec2 b, std::int32_t n, std::size_t trials,
                              std::uint64_t seed, int workers = 0);

/// Polar form: a = R1 e^{i theta1}, b = R2 e^{i theta2}.
FlatEdgeResult flat_edge_test(const WeightDistribution& dist, double theta1, double theta2, double R1, double R2,
                              std::int32_t n, std::size_t trials, std::uint64_t seed, int workers = 0);

/// mu(x) >= |x|_inf mu(1, 0). The right side is measured at the same distance
/// scale, T(0, (n |x|_inf, 0)) / n, in the same environments.
struct LinfCheck {
  bool holds = false;
  Estimate margin;  // per-trial mu(x) - |x|_inf mu(1, 0)
  Estimate mu_x;
  Estimate mu_axis;
  std::vector<std::array<double, 2>> samples;  // mu(x), mu_axis per trial
};

LinfCheck linf_bound_check(const WeightDistribution& dist, Vec2 x, std::int32_t n, std::size_t trials,
                           std::uint64_t seed, int workers = 0);

/// Two disjoint staircase segments, one step up then 1/delta steps right or
/// the reverse, each of M = 1 + 1/delta edges weighted 1 + epsilon X. The
/// construction is defined for every epsilon > 0; the bound on mu it feeds is
/// stated for epsilon < delta, reported in lemma_regime.
struct StaircaseResult {
  std::int32_t M = 0;
  bool lemma_regime = false;
  double lhs = 0.0;  // E[min(T(p), T(q))]
  double rhs = 0.0;  // M (1 + epsilon E[X])
  double gap = 0.0;
  double std_err = 0.0;
  std::vector<double> samples;  // min(T(p), T(q)) per trial
};

StaircaseResult staircase_bound(const WeightDistribution& x_dist, double epsilon, double delta, std::size_t trials,
                                std::uint64_t seed, int workers = 0);

inline constexpr std::size_t kBerryBlock = 4096;

/// Empirical P(X_1 + ... + X_M <= M E[X] - sqrt(M)). Samples are drawn in
/// blocks of kBerryBlock, one random stream per block.
struct BerryResult {
  std::int32_t M = 0;
  double threshold = 0.0;
  Proportion estimate;
  std::vector<std::size_t> block_hits;
};

BerryResult berry_probe(const WeightDistribution& x_dist, std::int32_t M, std::size_t samples, std::uint64_t seed,
                        int workers = 0);

/// delta_i = epsilon log^{3i}(1/epsilon) for 1 <= i <= floor(log(1/eps) / (7 log log(1/eps))).
std::vector<double> sides_schedule(double epsilon);

struct SidesWitness {
  std::string header;
  double epsilon = 0.0;
  std::vector<std::pair<double, double>> probes;
  std::vector<FlatEdgeResult> results;
  std::size_t strictly_convex = 0;
};

/// Flat-edge tests between directions (1, d1) and (1, d2) under 1 + epsilon X.
/// Qualitative evidence only; it cannot certify a lower bound on the number of
/// sides. Throws std::invalid_argument for a Constant base law or probes with
/// d1 log^3(1/d1) > d2.
SidesWitness sides_witness(double epsilon, const std::vector<std::pair<double, double>>& probes, std::int32_t n,
                           std::size_t trials, std::uint64_t seed, int workers = 0,
                           const WeightDistribution& x_dist = WeightDistribution::uniform(0.0, 1.0));

}  // namespace fpp
