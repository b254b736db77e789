#include "nematoplate/runtime.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace nematoplate {

namespace {
int g_threads = 1;
}

void set_threads(int n) { g_threads = std::max(1, n); }

int get_threads() { return g_threads; }

void parallel_chunks(int n, const std::function<void(int, int)>& fn) {
  const int chunks = chunk_count(n);
  const int workers = std::min(g_threads, chunks);
  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c)
      fn(c * kChunk, std::min(n, (c + 1) * kChunk));
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
        fn(c * kChunk, std::min(n, (c + 1) * kChunk));
    });
  for (auto& th : pool) th.join();
}

}  // namespace nematoplate
