#pragma once

#include <cstddef>
#include <functional>

namespace hyper3 {

/// Worker count from HYPER3_THREADS (if set and positive), else hardware concurrency.
unsigned thread_count();

/// Runs fn(0) .. fn(n-1) on up to `threads` workers (0 means thread_count()).
/// Each index runs exactly once; fn must not throw.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace hyper3
