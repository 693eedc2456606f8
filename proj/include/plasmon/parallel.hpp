#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace plasmon {

// Process-wide worker count. 0 means "auto" (hardware concurrency).
inline std::atomic<int>& thread_count_slot() {
    static std::atomic<int> n{0};
    return n;
}

inline void set_thread_count(int n) { thread_count_slot().store(n < 0 ? 0 : n); }

inline int resolved_thread_count() {
    int n = thread_count_slot().load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs f(i) for i in [0, n). Work is split into contiguous index ranges, one
// per worker; f must only write to slots owned by index i so that results are
// identical for every worker count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    if (n == 0) return;
    std::size_t workers = static_cast<std::size_t>(resolved_thread_count());
    if (workers > n) workers = n;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        std::size_t lo = n * t / workers;
        std::size_t hi = n * (t + 1) / workers;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

}
