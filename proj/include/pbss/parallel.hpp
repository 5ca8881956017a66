#pragma once

#include <cstddef>
#include <functional>

namespace pbss {

/// Worker count: PBSS_THREADS when set (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) across workers. Tasks must be independent;
/// callers write into preallocated slots so output order never depends on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace pbss
