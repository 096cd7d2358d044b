#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace modalmatrix {

// Runs body(0..n-1) on up to `threads` workers. Each index must touch only
// its own output slot, so results do not depend on scheduling. If bodies
// throw, the exception from the smallest failing index is rethrown.
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& body) {
    if (threads > n) threads = n;
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<int> next{0};
    std::mutex err_mutex;
    int err_index = -1;
    std::exception_ptr err;

    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (err_index < 0 || i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    if (err) std::rethrow_exception(err);
}

}  // namespace modalmatrix
