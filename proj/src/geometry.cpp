#include "fpp/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace fpp {

IntervalJ::IntervalJ(std::int32_t a_, std::int32_t b_) : a(a_), b(b_) {
  if (a > b) throw std::invalid_argument("IntervalJ: a > b");
}

PioneerProfile::PioneerProfile(std::int32_t t1, std::int32_t t2, std::vector<std::int32_t> f, Vertex start)
    : t1_(t1), t2_(t2), f_(std::move(f)), start_(start) {
  if (t1_ > t2_ || f_.size() != static_cast<std::size_t>(t2_ - t1_) + 1)
    throw std::invalid_argument("PioneerProfile: domain does not match values");
}

std::int32_t PioneerProfile::f(std::int32_t x) const {
  if (!in_range(x)) throw std::out_of_range("PioneerProfile::f: x outside X(p)");
  return f_[static_cast<std::size_t>(x - t1_)];
}

namespace {

template <class Key, class Val>
PioneerProfile first_hits(const LatticePath& p, Key key, Val val) {
  const std::int32_t t1 = std::min(key(p.front()), key(p.back()));
  const std::int32_t t2 = std::max(key(p.front()), key(p.back()));
  constexpr auto unset = std::numeric_limits<std::int32_t>::min();
  std::vector<std::int32_t> f(static_cast<std::size_t>(t2 - t1) + 1, unset);
  std::size_t missing = f.size();
  for (auto v : p.vertices()) {
    const auto k = key(v);
    if (k < t1 || k > t2) continue;
    auto& slot = f[static_cast<std::size_t>(k - t1)];
    if (slot == unset) {
      slot = val(v);
      if (--missing == 0) break;
    }
  }
  return PioneerProfile(t1, t2, std::move(f), p.front());
}

}  // namespace

PioneerProfile pioneer_profile(const LatticePath& p) {
  return first_hits(p, [](Vertex v) { return v.x; }, [](Vertex v) { return v.y; });
}

PioneerProfile vertical_pioneer_profile(const LatticePath& p) {
  return first_hits(p, [](Vertex v) { return v.y; }, [](Vertex v) { return v.x; });
}

bool in_tube(const PioneerProfile& profile, std::int32_t r, Vertex v) {
  if (!profile.in_range(v.x)) return false;
  return std::abs(std::int64_t{v.y} - profile.f(v.x)) <= r;
}

bool in_tube_slab(const PioneerProfile& profile, std::int32_t r, const IntervalJ& J, Vertex v) {
  return v.x >= J.a && v.x <= J.b && in_tube(profile, r, v);
}

bool is_r_close(const LatticePath& q, const PioneerProfile& profile, const IntervalJ& J, std::int32_t r) {
  if (!profile.in_range(J.a) || !profile.in_range(J.b))
    throw std::invalid_argument("is_r_close: J endpoints outside X(p)");
  const auto n = q.size();
  // prefix[i] = in-tube edges among the first i edges of q.
  std::vector<std::int32_t> prefix(n, 0);
  for (std::size_t i = 1; i < n; ++i)
    prefix[i] = prefix[i - 1] + (in_tube_slab(profile, r, J, q[i - 1]) && in_tube_slab(profile, r, J, q[i]) ? 1 : 0);

  std::vector<std::size_t> at_a, at_b;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_tube(profile, r, q[i])) continue;
    if (q[i].x == J.a) at_a.push_back(i);
    if (q[i].x == J.b) at_b.push_back(i);
  }
  const auto need = J.half_length_ceil();
  for (auto i : at_a)
    for (auto j : at_b) {
      const auto lo = std::min(i, j), hi = std::max(i, j);
      if (prefix[hi] - prefix[lo] >= need) return true;
    }
  return false;
}

bool has_bounded_slope(const PioneerProfile& profile, double rho, std::int32_t m) {
  const auto& f = profile.values();
  const auto n = static_cast<std::int64_t>(f.size());
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + std::max<std::int64_t>(m, 1); j < n; ++j)
      if (static_cast<double>(std::abs(std::int64_t{f[i]} - f[j])) > rho * static_cast<double>(j - i)) return false;
  return true;
}

}  // namespace fpp
