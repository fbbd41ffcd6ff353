#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace ricci {

// Worker cap: RICCI_QC_THREADS when set to a positive integer, otherwise the
// available hardware parallelism.
inline int worker_count() {
    if (const char* env = std::getenv("RICCI_QC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(0..n-1) across at most `workers` threads; each index is processed
// exactly once and results must be written to disjoint slots.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const int count = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (count == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = static_cast<std::size_t>(w); i < n; i += static_cast<std::size_t>(count)) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace ricci
