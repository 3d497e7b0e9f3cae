#pragma once

#include <cstddef>
#include <functional>

namespace spencer {

/// Worker count: $SPENCER_THREADS if set and positive, else the hardware concurrency.
std::size_t thread_count();

/// Splits [0, n) into contiguous chunks, one per worker, and runs body(begin, end) on each.
/// Results must not depend on the chunking.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace spencer
