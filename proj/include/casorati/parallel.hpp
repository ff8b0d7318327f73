#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace casorati {

/// Worker count: hardware concurrency capped by the CASORATI_THREADS environment
/// variable when set to a positive integer.
inline int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("CASORATI_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

/// Apply fn to every index in [0, count) across worker threads. Results must be
/// written to pre-sized per-index slots so output order never depends on timing.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
    const int workers = std::min(worker_count(), std::max(count, 1));
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace casorati
