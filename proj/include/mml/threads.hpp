#pragma once

// Worker-count resolution and a deterministic parallel index loop. Callers
// write results into preallocated slots keyed by index, so output never
// depends on scheduling order.

#include <cstddef>
#include <functional>

namespace mml {

// Worker cap from the MML_THREADS environment variable; 0, unset, or
// unparsable means all hardware cores. Always at least 1.
std::size_t worker_count();

// Runs fn(i) for every i in [0, count) across `workers` threads (0 resolves
// through worker_count). fn must be safe to call concurrently on distinct
// indices. The first exception thrown by any fn is rethrown after all
// workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t workers = 0);

}  // namespace mml
