#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"

using namespace fpp;

TEST_CASE("parallel trials match the serial reference") {
  auto fn = [](std::size_t i) {
    rng::CounterStream s(rng::derive_seed(3, i));
    double acc = 0.0;
    for (int k = 0; k < 100; ++k) acc += s.uniform();
    return acc;
  };
  const auto ref = run_trials_serial(257, fn);
  for (int w : {1, 2, 3, 8}) CHECK(run_trials(257, w, fn) == ref);
  CHECK(run_trials(0, 4, fn).empty());
  CHECK(default_workers() >= 1);
}

TEST_CASE("a failing trial propagates") {
  auto fn = [](std::size_t i) -> int {
    if (i == 17) throw std::runtime_error("trial 17");
    return static_cast<int>(i);
  };
  CHECK_THROWS_AS(run_trials(40, 4, fn), std::runtime_error);
  CHECK_THROWS_AS(run_trials_serial(40, fn), std::runtime_error);
}
