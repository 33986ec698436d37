#pragma once

#include <cstddef>
#include <functional>

namespace fracground {

enum class Reduction {
  deterministic,  // fixed block partition, blocks summed in order
  fast,           // one partial sum per worker; result depends on thread count
};

/// Worker cap: FRACGROUND_THREADS if set, else hardware concurrency.
int thread_cap();
/// Overrides the cap for this process (0 restores the environment default).
void set_thread_cap(int threads);

/// Sums body(begin, end) over [0, count). In deterministic mode the range is
/// cut into a fixed number of blocks independent of the worker count, so the
/// result is bitwise reproducible.
double parallel_sum(std::size_t count,
                    const std::function<double(std::size_t, std::size_t)>& body,
                    Reduction mode = Reduction::deterministic);

}  // namespace fracground
