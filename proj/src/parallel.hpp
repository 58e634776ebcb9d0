#pragma once

// Index-parallel loop with deterministic error reporting: every index runs,
// and the exception thrown by the lowest failing index is returned.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tpi::detail {

struct LoopFailure {
  std::size_t index = 0;
  std::exception_ptr error;
};

template <class Fn>
std::vector<LoopFailure> parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&](std::size_t t) {
    for (std::size_t i = t; i < n; i += threads) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  std::vector<LoopFailure> failures;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) failures.push_back({i, errors[i]});
  }
  return failures;
}

}  // namespace tpi::detail
