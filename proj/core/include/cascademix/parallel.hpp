#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace cascademix::parallel {

// Process-wide cap on worker threads. Work is always split into chunks of a
// fixed size that does not depend on the thread count, and chunk results are
// combined in chunk order, so results are bitwise identical for any setting.
void set_max_threads(int n);
int max_threads();

inline constexpr std::size_t kChunk = 64;

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// Chunks may run on any thread; fn must only write to chunk-local state.
void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Deterministic sum of per-item values: items are evaluated in parallel,
// accumulated sequentially within each chunk, and chunks are reduced in
// index order (pairwise tree) regardless of the thread count.
double sum_items(std::size_t n, const std::function<double(std::size_t)>& item);

// Pairwise tree reduction of a vector of partial values, in index order.
double tree_sum(std::vector<double> values);

}  // namespace cascademix::parallel
