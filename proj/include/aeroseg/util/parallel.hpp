#pragma once

#include <cstddef>
#include <functional>

namespace aeroseg {

// Worker cap: AEROSEG_THREADS if set (>=1), else 1. Parallel sections write
// to disjoint preallocated slots, so results are independent of scheduling.
int thread_budget();

// Runs fn(i) for i in [0, n). With a budget of 1 this is a plain loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace aeroseg
