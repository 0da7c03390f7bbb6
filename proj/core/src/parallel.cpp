#include "cascademix/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace cascademix::parallel {

namespace {
std::atomic<int> g_max_threads{0};  // 0 = hardware concurrency

int effective_threads() {
  int n = g_max_threads.load(std::memory_order_relaxed);
  if (n <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    n = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return n;
}
}  // namespace

void set_max_threads(int n) { g_max_threads.store(n, std::memory_order_relaxed); }

int max_threads() { return effective_threads(); }

void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  const int threads = std::min<int>(effective_threads(), static_cast<int>(n_chunks));

  auto run_chunk = [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n);
    fn(c, lo, hi);
  };

  if (threads <= 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= n_chunks) return;
        run_chunk(c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

double tree_sum(std::vector<double> values) {
  if (values.empty()) return 0.0;
  // Pairwise reduction: adjacent pairs are combined until one value remains.
  while (values.size() > 1) {
    std::size_t half = (values.size() + 1) / 2;
    for (std::size_t i = 0; i + i + 1 < values.size() + 1; ++i) {
      const std::size_t a = 2 * i, b = 2 * i + 1;
      if (b < values.size())
        values[i] = values[a] + values[b];
      else if (a < values.size())
        values[i] = values[a];
    }
    values.resize(half);
  }
  return values[0];
}

double sum_items(std::size_t n, const std::function<double(std::size_t)>& item) {
  if (n == 0) return 0.0;
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(n_chunks, 0.0);
  for_chunks(n, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += item(i);
    partial[c] = acc;
  });
  return tree_sum(std::move(partial));
}

}  // namespace cascademix::parallel
