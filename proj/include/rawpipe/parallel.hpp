#pragma once

#include <cstddef>
#include <functional>

namespace rawpipe {

/// Worker count: `requested` if positive, else hardware concurrency; capped by
/// the RAWPIPE_THREADS environment variable when it is set.
int resolve_thread_count(int requested = 0);

/// Runs fn(i) for i in [0, n) on up to `threads` workers with dynamic
/// scheduling. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace rawpipe
