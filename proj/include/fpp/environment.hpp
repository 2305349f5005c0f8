#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <unordered_map>

#include "fpp/distribution.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

using Overlay = std::unordered_map<EdgeKey, double, EdgeKeyHash>;

/// Infinite IID edge-weight field on Z^2, generated on demand.
///
/// weight(e) is a pure function of (seed, dist, overlay, e): the uniform
/// variate for e is a counter-mode hash of the seed and the zig-zag encoded
/// edge coordinates, pushed through dist's quantile. Overlay entries win.
/// Immutable; safe to share across threads.
class Environment {
 public:
  /// Throws std::invalid_argument for laws that charge negative values or for
  /// Constant(0).
  Environment(std::uint64_t seed, WeightDistribution dist);

  std::uint64_t seed() const noexcept { return seed_; }
  const WeightDistribution& dist() const noexcept { return dist_; }
  const Overlay& overlay() const noexcept { return *overlay_; }

  double weight(const EdgeKey& e) const {
    if (!overlay_->empty()) {
      if (auto it = overlay_->find(e); it != overlay_->end()) return it->second;
    }
    return generated_weight(e);
  }
  double weight(Vertex a, Vertex b) const { return weight(EdgeKey::between(a, b)); }

  /// Weight ignoring the overlay.
  double generated_weight(const EdgeKey& e) const { return dist_.quantile(uniform_variate(e)); }
  /// The (0, 1) variate behind generated_weight.
  double uniform_variate(const EdgeKey& e) const;

  /// Copy with the given entries added to (and overriding) the overlay.
  Environment with_overlay(const Overlay& entries) const;
  Environment with_overlay(Overlay&& entries) const;

 private:
  std::uint64_t seed_;
  WeightDistribution dist_;
  std::uint64_t salt_h_;
  std::uint64_t salt_v_;
  std::shared_ptr<const Overlay> overlay_;
};

/// Shift amounts in [0, 1] per edge.
using ShiftMap = std::map<EdgeKey, double>;

/// Environment whose weights on tau's domain are replaced by
/// perturb(weight(e), tau(e), dir); other edges unchanged.
Environment perturb_environment(const Environment& env, const ShiftMap& tau, Direction dir);

}  // namespace fpp
