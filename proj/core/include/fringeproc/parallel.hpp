#pragma once

#include <cstddef>
#include <functional>

namespace fringe {

// Worker budget: FRINGEPROC_THREADS when set to a positive integer,
// otherwise the hardware concurrency (at least 1).
std::size_t thread_budget();

// Calls fn(i) for i in [0, n) across up to thread_budget() threads. Each
// index runs exactly once; the first exception thrown is rethrown after all
// workers stop. Callers write results into per-index slots so output order
// never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fringe
