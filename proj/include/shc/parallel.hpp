#pragma once

#include <functional>

namespace shc {

// Hardware concurrency, capped by SHC_THREADS when set to a positive integer.
int worker_count();

// Runs body(i) for i in [0, count). Each index is handled exactly once, so results
// written to per-index slots are identical for any worker count.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace shc
