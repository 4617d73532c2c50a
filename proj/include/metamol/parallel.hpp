// parallel.hpp — worker-count resolution and a static-partition parallel loop

#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace metamol {

// requested == 0 means auto. METAMOL_WORKERS overrides everything.
inline int resolve_worker_count(int requested) {
    if (const char* env = std::getenv("METAMOL_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs body(i) for i in [0, n). Work item i goes to worker i % workers, so the
// partition of items is independent of scheduling.
template <typename Body>
void parallel_for(int n, int workers, Body&& body) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([w, n, workers, &body] {
            for (int i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace metamol
