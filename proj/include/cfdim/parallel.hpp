#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cfdim {

// Runs fn(i) for i in [0, total) on `workers` threads in contiguous blocks.
// Each index must depend only on its own substream, so the result is the
// same for any worker count. Exceptions are rethrown on the caller thread.
template <typename Fn>
void parallel_for(std::size_t total, unsigned workers, Fn&& fn) {
    if (workers <= 1 || total < 2) {
        for (std::size_t i = 0; i < total; ++i) fn(i);
        return;
    }
    if (workers > total) workers = static_cast<unsigned>(total);
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cfdim
