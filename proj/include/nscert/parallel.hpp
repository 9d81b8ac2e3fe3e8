#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nscert {

/// Worker-thread count: `requested` (0 = hardware), capped by the
/// CERTIFY_THREADS environment variable when set.
inline int effective_thread_count(int requested = 0) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("CERTIFY_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

/// Runs body(i) for i in [0, n); iterations must be independent. Results
/// indexed by i are identical under any thread count.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < n; i += workers) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace nscert
