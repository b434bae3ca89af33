#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace matrange {

// Thread-count resolution: the OPSYS_RANGE_THREADS environment variable
// overrides any requested value; 0 means "hardware concurrency".
inline unsigned resolve_threads(unsigned requested) {
    if (const char* env = std::getenv("OPSYS_RANGE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) requested = static_cast<unsigned>(v);
    }
    if (requested == 0) {
        requested = std::thread::hardware_concurrency();
        if (requested == 0) requested = 1;
    }
    return requested;
}

// Deterministic data-parallel loop: fn(i) for i in [0, count), results
// indexed by i on the caller's side; identical output for any thread count.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (threads > count) threads = static_cast<unsigned>(count);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < count; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace matrange
