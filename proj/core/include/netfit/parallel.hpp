#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace netfit {

// Runs fn(i) for i in [0, count) on up to `jobs` threads.  Work items are
// handed out through a shared counter, so fn must not care about order.
// Results that depend on accumulation order should be written to per-index
// slots and reduced by the caller.  The first exception thrown by any fn is
// rethrown on the calling thread after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    if (count == 0) return;
    if (jobs <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Splits [0, count) into fixed-size blocks, runs compute(state, i) for the
// items of each block into a fresh state, and calls merge(state) once per
// block strictly in block order.  The merge order is a function of count and
// block_size alone, so floating-point reductions give identical results for
// every jobs value and schedule.
template <typename MakeState, typename Compute, typename Merge>
void ordered_block_reduce(std::size_t count, std::size_t block_size, int jobs,
                          MakeState&& make_state, Compute&& compute, Merge&& merge) {
    if (count == 0) return;
    if (block_size == 0) block_size = 1;
    const std::size_t blocks = (count + block_size - 1) / block_size;
    if (jobs <= 1 || blocks == 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            auto state = make_state();
            std::size_t end = std::min(count, (b + 1) * block_size);
            for (std::size_t i = b * block_size; i < end; ++i) compute(state, i);
            merge(state);
        }
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), blocks);
    std::atomic<std::size_t> next_block{0};
    std::size_t merge_turn = 0;
    std::mutex mutex;
    std::condition_variable turn_cv;
    std::exception_ptr error;
    auto body = [&] {
        for (;;) {
            std::size_t b = next_block.fetch_add(1, std::memory_order_relaxed);
            if (b >= blocks) return;
            std::exception_ptr local_error;
            auto state = make_state();
            try {
                std::size_t end = std::min(count, (b + 1) * block_size);
                for (std::size_t i = b * block_size; i < end; ++i) compute(state, i);
            } catch (...) {
                local_error = std::current_exception();
            }
            // even a failed block must take its merge turn or later blocks
            // would wait forever
            std::unique_lock lock(mutex);
            turn_cv.wait(lock, [&] { return merge_turn == b; });
            if (local_error) {
                if (!error) error = local_error;
                next_block.store(blocks, std::memory_order_relaxed);
            } else if (!error) {
                try {
                    merge(state);
                } catch (...) {
                    error = std::current_exception();
                    next_block.store(blocks, std::memory_order_relaxed);
                }
            }
            ++merge_turn;
            turn_cv.notify_all();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace netfit
