#pragma once

#include <functional>

namespace mop {

// Worker count: MOP_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs fn(i) for i in [begin, end). Workers inherit the caller's Real precision.
// The first exception thrown by any task is rethrown after all workers stop.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace mop
