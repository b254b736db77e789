#pragma once

#include <functional>

namespace nematoplate {

/// Data-parallel assembly width. 1 (default) runs serially; results are
/// bitwise independent of the setting because work is split into fixed
/// chunks whose partial results are combined in chunk order.
void set_threads(int n);
int get_threads();

/// Runs fn(chunk_begin, chunk_end) over [0, n) in fixed chunks of 2048.
/// Chunks are disjoint, so fn may write to per-chunk slots without locks.
void parallel_chunks(int n, const std::function<void(int, int)>& fn);

constexpr int kChunk = 2048;
inline int chunk_count(int n) { return (n + kChunk - 1) / kChunk; }

}  // namespace nematoplate
