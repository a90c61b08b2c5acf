#pragma once

#include <cstddef>
#include <functional>

namespace discflux {

/// Worker count: hardware concurrency, capped by DISCFLUX_THREADS when set.
int worker_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. The first exception
/// thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace discflux
