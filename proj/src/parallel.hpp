#pragma once

#include <cstddef>
#include <functional>

namespace reldenclu::detail {

// Worker count from RELDENCLU_THREADS; 0 or unset means hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, count) on up to worker_count() threads. The first
// exception thrown by any task is rethrown on the calling thread.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body);

}  // namespace reldenclu::detail
