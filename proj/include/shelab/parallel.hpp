#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace shelab {

// Worker count from SHELAB_WORKERS, else the hardware concurrency. Never
// affects results: every replica writes only its own slot.
inline std::size_t worker_count() {
    if (const char* env = std::getenv("SHELAB_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Calls body(i) for i in [0, count) across the worker pool. The first
// exception (by index) is rethrown after all workers finish.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::mutex mutex;
    std::exception_ptr error;
    std::size_t error_index = count;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(mutex);
                    if (i < error_index) {
                        error_index = i;
                        error = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace shelab
