#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cbeta {

//! Number of workers to use when the caller passes zero.
unsigned default_workers() noexcept;

//! Splits [0, count) into fixed-size blocks and evaluates fn(begin, end) for
//! each block on up to `workers` threads.
//!
//! Results come back indexed by block, so folding them in order gives output
//! that does not depend on the worker count. Block size must never be derived
//! from the worker count.
template <class Result, class Fn>
std::vector<Result> run_blocks(std::size_t count, std::size_t block_size, unsigned workers, Fn fn)
{
    if (block_size == 0)
        block_size = 1;
    std::size_t const n_blocks = (count + block_size - 1) / block_size;
    std::vector<Result> results(n_blocks);
    if (n_blocks == 0)
        return results;

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;)
        {
            std::size_t const b = next.fetch_add(1);
            if (b >= n_blocks)
                return;
            std::size_t const begin = b * block_size;
            std::size_t const end = std::min(count, begin + block_size);
            try
            {
                results[b] = fn(begin, end);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(n_blocks);
                return;
            }
        }
    };

    unsigned const n_threads = std::max(1u, std::min<unsigned>(workers ? workers : default_workers(),
                                                                 static_cast<unsigned>(n_blocks)));
    if (n_threads == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

}  // namespace cbeta
