#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace crescendo {

// Runs fn(i) for i in [0, n) across `threads` workers (0 = hardware
// concurrency). Work is split into contiguous blocks; fn must write only to
// its own index so the result is independent of scheduling.
template <typename Fn>
void parallel_for(size_t n, int threads, Fn&& fn) {
    unsigned nt = threads > 0 ? static_cast<unsigned>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
    if (nt <= 1 || n < 2 * nt) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const size_t chunk = (n + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        const size_t lo = t * chunk;
        const size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace crescendo
