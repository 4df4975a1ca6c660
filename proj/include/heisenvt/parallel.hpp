#pragma once

/// Deterministic work sharing: tasks write into per-index slots, so results
/// never depend on the worker count or schedule. The worker count comes from
/// set_worker_threads (the CLI wires --threads / HEISENVT_THREADS into it).

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace heisenvt {

inline long& worker_threads() {
    static long n = 1;
    return n;
}

inline void set_worker_threads(long n) { worker_threads() = n < 1 ? 1 : n; }

template <class F>
void parallel_for(size_t count, F&& fn) {
    long workers = worker_threads();
    if (workers <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    long spawn = std::min<long>(workers, static_cast<long>(count));
    pool.reserve(static_cast<size_t>(spawn));
    for (long t = 0; t < spawn; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace heisenvt
