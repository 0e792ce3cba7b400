#pragma once

#include <cstddef>
#include <functional>

namespace sentinel {

/// Worker count: INTERVAL_SENTINEL_THREADS if set and positive, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; the
/// first exception thrown by any worker is rethrown after all join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sentinel
