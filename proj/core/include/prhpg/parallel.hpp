#pragma once

#include <cstddef>
#include <functional>

namespace prhpg {

// Runs fn(i) for every i in [0, count), using up to max_threads worker
// threads. Each index is processed exactly once, so callers that write
// results into preallocated per-index slots and reduce serially afterwards
// get results that are identical for any thread count.
void parallel_for(std::size_t count, int max_threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace prhpg
