#pragma once

#include <cstddef>
#include <functional>

namespace vclust {

/// Worker count for `requested` (0 = hardware concurrency, at least 1).
unsigned resolve_threads(unsigned requested);

/// Calls body(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out dynamically; results must be written to per-index slots. The
/// first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace vclust
