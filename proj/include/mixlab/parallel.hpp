#pragma once

#include <cstddef>
#include <functional>

namespace mixlab {

// Worker count: MIXLAB_THREADS if set, otherwise the hardware concurrency.
int thread_count();

// Runs fn(block_index, begin, end) over fixed-size item blocks. Block
// boundaries do not depend on the worker count, so callers that write one
// result slot per block and combine slots in block order get the same answer
// for any MIXLAB_THREADS.
void parallel_blocks(std::size_t n_items, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& fn);

}  // namespace mixlab
