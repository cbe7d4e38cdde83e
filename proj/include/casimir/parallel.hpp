#pragma once

#include <cstddef>
#include <functional>

namespace casimir {

/// Worker count used by the parallel loops below (>= 1; default 1).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for i in [0, n). Each index is written by exactly one
/// worker, so results stored per index do not depend on the thread count.
/// The first exception thrown by any body is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace casimir
