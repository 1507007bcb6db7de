#ifndef CFCM_PARALLEL_HPP
#define CFCM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace cfcm {

/// Worker count: hardware concurrency, capped by the CFCM_THREADS environment variable.
std::size_t thread_budget();

/// Splits [0, count) into contiguous chunks and runs `body(begin, end)` on each,
/// possibly concurrently. Small ranges run inline.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace cfcm

#endif  // CFCM_PARALLEL_HPP
