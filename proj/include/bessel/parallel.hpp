#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "bessel/rng.hpp"

namespace bessel {

/** Worker count: `requested` if positive, otherwise the hardware count. */
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/**
 * Runs fn(i) for i in [0, n) across up to `workers` threads. Work items must
 * write only to their own slots; no ordering between items is promised.
 */
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const int w = std::min<std::size_t>(resolve_workers(workers), n == 0 ? 1 : n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += w) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

/**
 * Per-path Monte Carlo: sample i is produced from its own engine
 * make_stream_rng(seed, i) and stored at index i, so the returned vector is
 * bit-identical for every worker cap and schedule.
 */
template <class Fn> // double fn(std::size_t i, Xoshiro256pp& rng)
std::vector<double> mc_samples(std::size_t n, std::uint64_t seed, int workers, Fn&& fn) {
    std::vector<double> vals(n);
    parallel_for(n, workers, [&](std::size_t i) {
        Xoshiro256pp rng = make_stream_rng(seed, i);
        vals[i] = fn(i, rng);
    });
    return vals;
}

} // namespace bessel
