#pragma once

#include <cstddef>
#include <functional>

namespace pocket {

/// Runs fn(0) .. fn(n-1) on up to `threads` worker threads. Each index runs
/// exactly once; callers write results by index, so the outcome does not
/// depend on scheduling. The exception of the lowest failing index is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

} // namespace pocket
