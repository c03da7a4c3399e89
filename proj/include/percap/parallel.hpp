#ifndef PERCAP_PARALLEL_HPP
#define PERCAP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace percap::par {

// Worker count used by for_blocks; 0 restores the hardware default.
void set_workers(int n);
int workers();

// Splits [0, total) into fixed-size blocks and calls
// fn(block_index, begin, end) for each, possibly from multiple threads.
// Block boundaries depend only on total and block_size, so a function that
// writes results into per-block slots produces output independent of the
// worker count. Exceptions from fn are rethrown on the calling thread.
void for_blocks(std::size_t total, std::size_t block_size,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

} // namespace percap::par

#endif
