#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tg {

// TG_THREADS caps the pool; unset means hardware_concurrency.
inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("TG_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1 && static_cast<unsigned long>(n) < hw) return static_cast<unsigned>(n);
        if (n >= 1) return hw;
    }
    return hw;
}

// Calls f(i) for i in [0, n). Work is split into contiguous blocks, so callers
// writing into slot i get output independent of the worker count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    unsigned w = worker_count();
    if (w <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    if (w > n) w = static_cast<unsigned>(n);
    std::exception_ptr first;
    std::mutex m;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) {
        std::size_t lo = n * t / w, hi = n * (t + 1) / w;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(m);
                if (!first) first = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

}  // namespace tg
