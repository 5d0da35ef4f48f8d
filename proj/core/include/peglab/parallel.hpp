#pragma once

#include <cstddef>
#include <functional>

namespace peglab {

/// Worker count: PEGLAB_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
int thread_count();

/// Runs fn(i) for i in [0, n). Each index is handled exactly once; callers
/// write results into per-index slots, so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace peglab
