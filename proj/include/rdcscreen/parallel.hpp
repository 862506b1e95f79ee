#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rdcscreen {

// Runs fn(i) for i in [0, count) on up to `workers` threads. fn must only
// write to slots owned by index i. If any call throws, the exception from
// the lowest failing index is rethrown after all threads finish, so the
// reported failure does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn)
{
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = count;
    std::exception_ptr error;

    auto body = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(body);
    }
    body();
    pool.clear();

    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace rdcscreen
