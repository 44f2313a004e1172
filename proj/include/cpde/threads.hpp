#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cpde {

/// Worker cap for parallel sections: CASCADE_PDE_THREADS when set, otherwise
/// the hardware concurrency. Results never depend on the cap; it only bounds
/// how many independent runs execute at once.
inline int thread_budget() {
  if (const char* env = std::getenv("CASCADE_PDE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(0..count-1), at most thread_budget() at a time. Each index must
/// be independent of the others.
inline void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::min(count, thread_budget());
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace cpde
