#pragma once

#include <cstddef>
#include <functional>

namespace minkcurv {

// Worker count used by parallel_for. 0 restores the hardware default.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous blocks, one per
// worker; callers write into per-index slots so reductions stay in index order
// and results do not depend on the worker count. The first exception thrown by
// any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace minkcurv
