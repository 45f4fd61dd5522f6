#pragma once

#include <cstdint>
#include <functional>

namespace mdsrel {

// Worker count: MDSREL_THREADS caps it, 0/unset means hardware concurrency.
int thread_count();

// Process-wide override (takes precedence over the environment); 0 restores
// the default. Used by determinism tests.
void set_thread_count(int count);

// Runs fn(i) for i in [0, n) on static index ranges. Work assignment depends
// only on (n, worker count); callers keep results in per-index slots and
// reduce serially, so outputs are identical for any worker count.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace mdsrel
