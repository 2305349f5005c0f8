#pragma once

#include <cstdint>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

/// Integer interval [a, b], a <= b.
struct IntervalJ {
  std::int32_t a = 0;
  std::int32_t b = 0;

  IntervalJ() = default;
  /// Throws std::invalid_argument when a > b.
  IntervalJ(std::int32_t a_, std::int32_t b_);

  std::int32_t length() const noexcept { return b - a; }
  /// Minimum number of in-tube edges: ceil(|J| / 2).
  std::int32_t half_length_ceil() const noexcept { return (length() + 1) / 2; }
};

/// First-hit ordinate f(x) of a path on every vertical line x in [t1, t2],
/// scanning from the recorded start vertex.
class PioneerProfile {
 public:
  PioneerProfile(std::int32_t t1, std::int32_t t2, std::vector<std::int32_t> f, Vertex start);

  std::int32_t t1() const noexcept { return t1_; }
  std::int32_t t2() const noexcept { return t2_; }
  bool in_range(std::int32_t x) const noexcept { return x >= t1_ && x <= t2_; }
  /// Throws std::out_of_range outside [t1, t2].
  std::int32_t f(std::int32_t x) const;
  Vertex pioneer(std::int32_t x) const { return {x, f(x)}; }
  Vertex start() const noexcept { return start_; }
  const std::vector<std::int32_t>& values() const noexcept { return f_; }

  friend bool operator==(const PioneerProfile&, const PioneerProfile&) = default;

 private:
  std::int32_t t1_;
  std::int32_t t2_;
  std::vector<std::int32_t> f_;
  Vertex start_;
};

PioneerProfile pioneer_profile(const LatticePath& p);

/// Profile of first hits on horizontal lines, keyed by y (the axis-exchanged
/// construction). Its "f" maps y to x.
PioneerProfile vertical_pioneer_profile(const LatticePath& p);

bool in_tube(const PioneerProfile& profile, std::int32_t r, Vertex v);

/// In the tube and inside the slab x in [J.a, J.b].
bool in_tube_slab(const PioneerProfile& profile, std::int32_t r, const IntervalJ& J, Vertex v);

/// q is r-close to the profiled path on J: for some u in Tube_r ∩ S_a and
/// v in Tube_r ∩ S_b on q, the piece of q between them has at least
/// ceil(|J|/2) edges with both ends in Tube_r ∩ S_J. All (u, v) pairs are
/// tried. Throws std::invalid_argument when J leaves the profile range.
bool is_r_close(const LatticePath& q, const PioneerProfile& profile, const IntervalJ& J, std::int32_t r);

/// |f(x1) - f(x2)| <= rho |x1 - x2| for all x1, x2 with |x1 - x2| >= m.
bool has_bounded_slope(const PioneerProfile& profile, double rho, std::int32_t m);

}  // namespace fpp
