#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace predint {

// Worker cap: PREDINT_THREADS when set, hardware concurrency otherwise.
inline std::size_t worker_count(std::size_t tasks) {
  std::size_t cap = std::thread::hardware_concurrency();
  if (cap == 0) cap = 1;
  if (const char* env = std::getenv("PREDINT_THREADS")) {
    const long parsed = std::atol(env);
    if (parsed >= 1) cap = static_cast<std::size_t>(parsed);
  }
  return std::min(cap, std::max<std::size_t>(tasks, 1));
}

// Runs fn(i) for i in [0, count). Tasks must be independent and write only to
// their own slots; the result is then identical for any worker count.
template <typename F>
void parallel_for(std::size_t count, F&& fn) {
  const std::size_t workers = worker_count(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace predint
