#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace multcover {

// Worker count: MULTCOVER_THREADS if set and >= 1, else hardware concurrency.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("MULTCOVER_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(chunk) for chunk in [0, n_chunks) on up to thread_budget() threads.
// The chunk decomposition is fixed by n_chunks alone, so per-chunk results are
// identical regardless of how many threads execute them; callers combine the
// per-chunk outputs in chunk order to keep totals bit-for-bit reproducible.
inline void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<std::size_t>(thread_budget(), n_chunks == 0 ? 1 : n_chunks);
    if (workers <= 1 || n_chunks <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < n_chunks; c += workers)
                fn(c);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace multcover
