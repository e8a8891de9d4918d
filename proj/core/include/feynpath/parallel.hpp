#pragma once

#include <cstddef>
#include <functional>

namespace feynpath {

// Worker cap from FEYNPATH_THREADS, else hardware concurrency (at least 1).
unsigned default_thread_count();

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled by exactly one call, so results written per index do not depend
// on scheduling. Exceptions from workers are rethrown (lowest index first).
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace feynpath
