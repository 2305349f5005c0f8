#include "fpp/environment.hpp"

#include <stdexcept>

#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr std::uint64_t zigzag(std::int32_t v) {
  return static_cast<std::uint32_t>((static_cast<std::uint32_t>(v) << 1) ^ static_cast<std::uint32_t>(v >> 31));
}

}  // namespace

Environment::Environment(std::uint64_t seed, WeightDistribution dist)
    : seed_(seed),
      dist_(std::move(dist)),
      salt_h_(rng::mix64(rng::mix64(seed) ^ 0x5851f42d4c957f2dULL)),
      salt_v_(rng::mix64(rng::mix64(seed) ^ 0x14057b7ef767814fULL)),
      overlay_(std::make_shared<const Overlay>()) {
  if (!dist_.nonnegative()) throw std::invalid_argument("edge weights must be nonnegative");
  if (dist_.is_constant() && dist_.mean() == 0.0)
    throw std::invalid_argument("Constant(0) weights are not allowed");
}

double Environment::uniform_variate(const EdgeKey& e) const {
  const std::uint64_t key = zigzag(e.x) | (zigzag(e.y) << 32);
  const std::uint64_t salt = e.orientation == Orientation::horizontal ? salt_h_ : salt_v_;
  return rng::unit_open(rng::mix64(rng::mix64(key) ^ salt));
}

Environment Environment::with_overlay(const Overlay& entries) const {
  Environment out = *this;
  auto merged = std::make_shared<Overlay>(*overlay_);
  for (const auto& [k, w] : entries) {
    if (!(w >= 0.0)) throw std::invalid_argument("overlay weights must be nonnegative");
    (*merged)[k] = w;
  }
  out.overlay_ = std::move(merged);
  return out;
}

Environment Environment::with_overlay(Overlay&& entries) const {
  if (!overlay_->empty()) return with_overlay(static_cast<const Overlay&>(entries));
  for (const auto& [k, w] : entries)
    if (!(w >= 0.0)) throw std::invalid_argument("overlay weights must be nonnegative");
  Environment out = *this;
  out.overlay_ = std::make_shared<const Overlay>(std::move(entries));
  return out;
}

Environment perturb_environment(const Environment& env, const ShiftMap& tau, Direction dir) {
  if (tau.empty()) return env;
  const GaussianCoupling coupling(env.dist());
  Overlay entries;
  entries.reserve(tau.size());
  for (const auto& [e, sigma] : tau) entries.emplace(e, perturb(coupling, env.weight(e), sigma, dir));
  return env.with_overlay(std::move(entries));
}

}  // namespace fpp
