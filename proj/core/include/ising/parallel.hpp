#pragma once

#include <cstdint>
#include <functional>

namespace ising {

// Worker count: ISING_THREADS if set (>= 1), otherwise hardware concurrency.
int thread_count();

// Runs fn(lo, hi) over [0,n) split into fixed-size blocks. Block boundaries
// do not depend on the worker count, so any reduction done per block and
// combined in block order gives bit-identical results for every thread count.
void parallel_for_blocks(int64_t n, int64_t block_size,
                         const std::function<void(int64_t, int64_t)>& fn);

}  // namespace ising
