#pragma once

#include <cstdint>
#include <functional>

namespace acceptmc {

/// Runs fn(task_index) for every index in [0, n_tasks) on up to `workers`
/// threads. Callers must write task results into disjoint preallocated
/// slots; with that discipline the outcome is identical for any worker
/// count. The first exception thrown by a task is rethrown to the caller.
void parallel_for(std::int64_t n_tasks, int workers,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace acceptmc
