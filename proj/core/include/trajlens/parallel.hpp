#pragma once

#include <functional>

namespace trajlens {

// Worker cap: TRAJLENS_THREADS if set (clamped to >= 1), otherwise the
// hardware concurrency.
int max_threads();

// Runs body(0..count-1) on up to max_threads() workers. Bodies must write
// only to their own output slot so results are identical to a sequential
// run. Exceptions are rethrown on the calling thread.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace trajlens
