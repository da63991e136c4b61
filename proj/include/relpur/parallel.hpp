#pragma once

#include <cstddef>
#include <functional>

namespace relpur {

/// Calls fn(begin, end) over [0, n) in fixed-size chunks. Chunk boundaries do
/// not depend on `threads`, so per-index results are identical for any
/// worker count. threads == 0 means hardware concurrency.
void parallel_chunks(std::size_t n, std::size_t chunk, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

unsigned resolve_thread_count(unsigned requested);

}  // namespace relpur
