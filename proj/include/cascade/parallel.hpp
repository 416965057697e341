#pragma once

#include <cstddef>
#include <functional>

namespace cascade {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is pulled in
// index order; the first exception is rethrown after all workers join.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

// Thread count from CASCADE_EFT_THREADS or hardware concurrency.
int default_thread_count();

}  // namespace cascade
