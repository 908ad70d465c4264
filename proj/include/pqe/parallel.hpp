#pragma once

#include <cstddef>
#include <functional>

namespace pqe {

// 0 means "use all available processors".
unsigned effective_jobs(unsigned requested);

// Splits [0, n) into at most `jobs` contiguous ranges and runs fn(begin, end)
// on them concurrently. fn must only write to range-disjoint state; results
// are then independent of the job count, which is what keeps parallel runs
// byte-identical to --jobs 1 runs.
void parallel_for(unsigned jobs, std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace pqe
