#pragma once

#include <cstddef>
#include <functional>

namespace specmult {

/// Worker count: SPECMULT_THREADS if set, else hardware concurrency.
std::size_t thread_count();

/// Runs fn(i) for i in [0, n).  Results must be written to per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace specmult
