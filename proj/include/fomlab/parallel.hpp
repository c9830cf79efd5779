#pragma once

#include <cstddef>
#include <functional>

namespace fomlab {

/// Worker count: FOMLAB_THREADS if set and positive, else hardware concurrency.
unsigned default_parallelism();

/// Runs body(begin, end) over fixed-size blocks of [0, count). Block
/// boundaries depend only on count and block size, never on the worker
/// count, so per-block partial results can be reduced in block order for
/// bitwise-reproducible output.
void parallel_blocks(std::size_t count, std::size_t block_size, unsigned workers,
                     const std::function<void(std::size_t block, std::size_t begin, std::size_t end)>& body);

}  // namespace fomlab
