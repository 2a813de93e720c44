#pragma once

#include <cstddef>
#include <functional>

namespace halfline {

// --threads / HALFLINE_WALK_THREADS, falling back to hardware concurrency.
int default_thread_count();
void set_thread_override(int threads);  // 0 restores the default

// Runs fn(i) for i in [0, n) on a fixed worker team. Work item i always runs
// exactly once; callers write into pre-sized slots, so results do not depend
// on scheduling. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace halfline
