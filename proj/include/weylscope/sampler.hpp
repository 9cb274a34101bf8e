#pragma once

// Counter-based seeded sampling over chart domains. Each draw is keyed by
// (seed, sample index, coordinate), so parallel surveys are order-independent
// and byte-reproducible.

#include "weylscope/metric.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace weylscope {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
    std::uint64_t k = splitmix64(seed ^ splitmix64(index + 0x1234ull));
    k = splitmix64(k + slot * 0x9E3779B97F4A7C15ull);
    return static_cast<double>(k >> 11) * 0x1.0p-53;
}

// default open interval for coordinates without a domain hint
inline std::pair<double, double> coordinate_interval(const MetricDefinition& def, int i) {
    if (def.domain_hints[static_cast<size_t>(i)]) return *def.domain_hints[static_cast<size_t>(i)];
    return {-1.0, 1.0};
}

inline Eigen::VectorXd sample_point(const MetricDefinition& def, std::uint64_t seed, int index,
                                    double margin_frac = 0.05) {
    const int n = def.dim();
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) {
        auto [lo, hi] = coordinate_interval(def, i);
        const double margin = margin_frac * (hi - lo);
        const double u = uniform01(seed, static_cast<std::uint64_t>(index),
                                   static_cast<std::uint64_t>(i));
        p[i] = lo + margin + u * (hi - lo - 2.0 * margin);
    }
    return p;
}

inline int worker_count() {
    if (const char* env = std::getenv("WEYLSCOPE_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
}

// deterministic by construction: slot i is written only by the worker owning i
inline void parallel_for(int count, const std::function<void(int)>& body) {
    const int workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) body(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace weylscope
