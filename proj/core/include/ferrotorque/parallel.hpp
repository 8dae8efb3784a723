#pragma once

#include <cstddef>
#include <functional>

namespace ferrotorque {

/// Worker count: hardware concurrency, capped by FERROTORQUE_THREADS when set.
unsigned worker_count();

/// Calls body(i) for every i in [0, n) across worker threads. Each index is
/// written by exactly one call, so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ferrotorque
