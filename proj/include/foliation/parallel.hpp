#pragma once

#include <cstddef>
#include <functional>

namespace foliation {

/// Worker count from FOLIATION_ENERGY_THREADS (0 or unset = hardware).
std::size_t worker_count();

/// Runs body(i) for i in [0, count). The first exception thrown by any task
/// is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace foliation
