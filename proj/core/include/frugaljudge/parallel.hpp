#pragma once

#include <cstddef>
#include <functional>

namespace frugal {

/// Worker cap: FRUGAL_JUDGE_THREADS if set (>= 1), else the hardware count.
int max_threads();

/// Runs fn(0..n-1) across up to max_threads() workers with static chunking.
/// Callers address results by index, so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace frugal
