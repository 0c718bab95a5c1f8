// Minimal fork-join helper. Work is split into caller-defined blocks; callers
// keep one output buffer per block and combine them in block order, so results
// do not depend on the number of workers.
#pragma once

#include <cstddef>
#include <functional>

namespace ddd {

// DDD_THREADS if set to a positive integer, else the hardware concurrency.
int worker_count();

// Calls fn(i) for every i in [0, n). The first exception thrown by any call is
// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int workers = -1);

}  // namespace ddd
