#pragma once

#include <functional>

namespace evdom {

/// Worker cap: EVDOM_THREADS when set (clamped to >= 1), else all cores.
int max_threads();

/// Runs fn(0..count-1) on up to `threads` workers (0 = max_threads()).
/// Each index writes only its own output slot, so results are bitwise
/// independent of the scheduling; reductions stay with the caller in fixed
/// left-to-right order. Exceptions are captured and rethrown.
void parallel_for(int count, const std::function<void(int)>& fn, int threads = 0);

}  // namespace evdom
