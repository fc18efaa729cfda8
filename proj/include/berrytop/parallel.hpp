#pragma once

#include <cstddef>
#include <functional>

namespace berrytop {

/// Worker count: `requested` if nonzero, else BERRYTOP_THREADS when set to a
/// positive integer, else the hardware concurrency (at least 1).
unsigned worker_count(unsigned requested = 0);

/// Calls body(i) for i in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; callers write into per-index slots so results do not
/// depend on scheduling. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace berrytop
