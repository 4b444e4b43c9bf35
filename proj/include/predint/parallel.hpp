#pragma once

#include <functional>

namespace predint {

/// Global worker budget for batch operations (0 = hardware concurrency).
/// Thread count never changes computed values, only wall time.
void set_max_threads(int n);
int max_threads();

namespace detail {

/// Runs fn(0..count-1), possibly concurrently. Tasks must write to disjoint
/// slots. Nested calls degrade to serial execution, and the task results must
/// not depend on which worker executes them.
void parallel_tasks(int count, const std::function<void(int)>& fn);

}  // namespace detail
}  // namespace predint
