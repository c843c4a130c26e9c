#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace oqhn::util {

/// Exact integer power by repeated squaring. Handles negative bases and
/// exponent 0 (returns 1.0 even for base 0, matching the M^0 convention
/// used by the linearization coefficient).
inline double ipow(double base, int exp) {
    if (exp < 0) throw std::invalid_argument("ipow: negative exponent");
    double r = 1.0, b = base;
    while (exp > 0) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

/// splitmix64 mix, used to derive independent per-task RNG seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(base ^ mix_seed(a ^ mix_seed(b)));
}

/// Runs fn(i) for i in [0, n). Work items must be independent; callers
/// gather results by index so the outcome does not depend on thread count.
inline void parallel_for_index(std::size_t n, int threads,
                               const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const int nt = static_cast<int>(std::min<std::size_t>(threads, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

/// Fixed-format float for CSV output; deterministic across platforms/locales.
inline std::string fmt_g(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

}  // namespace oqhn::util
