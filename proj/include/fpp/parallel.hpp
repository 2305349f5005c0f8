#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fpp {

/// Number of workers used when the caller passes workers <= 0.
int default_workers();

/// Serial reference: evaluates fn(0..count-1) in index order.
template <class Fn>
auto run_trials_serial(std::size_t count, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
  return out;
}

/// OpenMP kernel over independent trials. fn(i) must depend only on i (derive
/// any randomness from i), so the output equals run_trials_serial for every
/// worker count. The first exception thrown by any trial is rethrown.
template <class Fn>
auto run_trials(std::size_t count, int workers, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  if (workers <= 0) workers = default_workers();
  if (workers == 1 || count < 2) return run_trials_serial(count, fn);

  std::vector<std::optional<R>> slots(count);
  std::exception_ptr failure;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long long i = 0; i < n; ++i) {
    try {
      slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
    } catch (...) {
#pragma omp critical(fpp_trial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace fpp
