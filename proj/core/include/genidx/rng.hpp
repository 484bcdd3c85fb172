#pragma once

#include <random>
#include <span>

#include "genidx/types.hpp"

namespace genidx {

/* Thin, engine-stable sampling helpers. The standard distributions are
 * implementation-defined, so reproducible experiments draw through these. */

/** Uniform integer in [0, n) by rejection sampling. */
inline std::size_t pick_index(std::mt19937_64 &rng, std::size_t n) {
    if (n <= 1) return 0;
    std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t v;
    do { v = rng(); } while (v >= limit);
    return static_cast<std::size_t>(v % n);
}

/** Uniform double in [0, 1). */
inline double pick_unit(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/** Weighted pick over non-negative weights; size_t(-1) if all weights are 0. */
inline std::size_t pick_weighted(std::mt19937_64 &rng, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (not (total > 0.0)) return static_cast<std::size_t>(-1);
    double u = pick_unit(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    /* Rounding spill lands on the last positive weight. */
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0) return i;
    return static_cast<std::size_t>(-1);
}

/** Gaussian via Box-Muller, engine-stable across standard libraries. */
inline double pick_normal(std::mt19937_64 &rng, double mean, double stddev) {
    double u1 = pick_unit(rng);
    double u2 = pick_unit(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    return mean + stddev * z;
}

/** Fisher-Yates shuffle driven by pick_index. */
template<class T>
void shuffle_stable(std::vector<T> &v, std::mt19937_64 &rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[pick_index(rng, i)]);
}

} // namespace genidx
