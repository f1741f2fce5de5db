#pragma once

#include <cstddef>
#include <functional>

namespace sskm {

/// Resolves a thread-count request: 0 means hardware concurrency; the
/// result is clamped to [1, n].
unsigned resolve_threads(unsigned requested, std::size_t n);

/// Runs fn(begin, end, worker) over contiguous chunks of [0, n). Chunk
/// boundaries depend only on n and the resolved thread count, and every
/// element's work must be independent, so results are identical for any
/// thread count. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t, unsigned)>& fn);

}  // namespace sskm
