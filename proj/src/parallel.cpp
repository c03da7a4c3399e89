#include "percap/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace percap::par {

namespace {

int worker_override = 0;

int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

void set_workers(int n) { worker_override = n > 0 ? n : 0; }

int workers() { return worker_override > 0 ? worker_override : default_workers(); }

void for_blocks(std::size_t total, std::size_t block_size,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (total == 0) {
        return;
    }
    if (block_size == 0) {
        block_size = total;
    }
    const std::size_t blocks = (total + block_size - 1) / block_size;

    auto run_block = [&](std::size_t block) {
        const std::size_t begin = block * block_size;
        const std::size_t end = std::min(total, begin + block_size);
        fn(block, begin, end);
    };

    const int nworkers =
        static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers()), blocks));
    if (nworkers <= 1) {
        for (std::size_t blk = 0; blk < blocks; ++blk) {
            run_block(blk);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t blk = next.fetch_add(1);
            if (blk >= blocks || failed.load()) {
                return;
            }
            try {
                run_block(blk);
            } catch (...) {
                if (!failed.exchange(true)) {
                    error = std::current_exception();
                }
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nworkers));
    for (int i = 0; i < nworkers; ++i) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failed.load()) {
        std::rethrow_exception(error);
    }
}

} // namespace percap::par
