#pragma once

#include <cstddef>
#include <functional>

namespace glround {

/// Worker count: GLROUND_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs fn(i) for i in [0, count) across worker_count() threads. Callers write
/// into index-addressed slots, so results never depend on scheduling.
/// The first exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Enumeration budget: GLROUND_BUDGET if set, else `fallback`.
double enumeration_budget(double fallback);

}  // namespace glround
