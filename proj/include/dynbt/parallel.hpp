#ifndef DYNBT_PARALLEL_HPP
#define DYNBT_PARALLEL_HPP

#include <functional>

namespace dynbt {

// Runs fn(i) for every i in [0, n) on up to `jobs` worker threads (inline
// when jobs <= 1). Tasks must write results into per-index slots; the first
// exception thrown by any task is rethrown on the calling thread.
void parallel_for(long n, int jobs, const std::function<void(long)>& fn);

}  // namespace dynbt

#endif  // DYNBT_PARALLEL_HPP
