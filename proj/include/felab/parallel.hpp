#pragma once

#include <cstddef>
#include <functional>

namespace felab {

// Process-wide thread budget; defaults to FELAB_THREADS or the hardware concurrency.
int thread_budget();
void set_thread_budget(int threads);

// Runs body(i) for i in [0, n); each index is handled exactly once and callers write
// results into index-addressed storage, so reductions stay in fixed order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace felab
