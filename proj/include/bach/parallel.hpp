#pragma once

#include <cstddef>
#include <functional>

namespace bach {

/// Thread count from BACH_THREADS, else the hardware concurrency (>= 1).
int default_threads();

/// Calls fn(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Work is split into contiguous blocks; fn must only write to slot i.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace bach
