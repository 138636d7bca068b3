#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace umse::detail {

// Runs body(i) for i in [0, count) across OpenMP threads. Each body writes
// only to slot i of its caller's output, so results are independent of the
// schedule. The first exception thrown by any iteration is rethrown here.
template <typename Body>
void parallel_for_index(std::size_t count, Body&& body) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace umse::detail
