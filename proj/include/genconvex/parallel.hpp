#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace genconvex {

// Worker count: GENCONVEX_THREADS caps internal parallelism, default is the
// machine parallelism.
inline int thread_budget() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("GENCONVEX_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return std::min(v, hw * 4);
        } catch (...) {
        }
    }
    return hw;
}

// Static-chunked parallel loop. Results must be written to disjoint,
// index-addressed slots so assembly order is deterministic. The first
// exception thrown by any worker is rethrown after the join.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
    const int workers = std::min(thread_budget(), std::max(1, n));
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::mutex err_mutex;
    std::exception_ptr err;
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &err, &err_mutex]() {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace genconvex
