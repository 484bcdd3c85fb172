#pragma once

#include <cstddef>
#include <span>

#include "genidx/layout.hpp"
#include "genidx/types.hpp"

namespace genidx {

/** Linear model over (key, position) with error bounds that cover the true
 * position of every key it was fitted on: for each stored key at position i,
 * i lies in [predict(key) - under, predict(key) + over]. */
struct LinRegModel {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t under = 0; // worst overestimation, steps back
    std::size_t over = 0;  // worst underestimation, steps forward

    std::size_t predict(key_type key, std::size_t n) const {
        if (n == 0) return 0;
        double pos = slope * static_cast<double>(key) + intercept;
        if (not (pos > 0.0)) return 0;
        if (pos >= static_cast<double>(n - 1)) return n - 1;
        return static_cast<std::size_t>(pos);
    }

    friend bool operator==(const LinRegModel&, const LinRegModel&) = default;
};

/** Least-squares fit of position over key for a sorted key array, plus the
 * error bounds. A single key (or zero spread) degenerates to slope 0. */
template<class KeyAt>
LinRegModel fit_linreg(std::size_t n, KeyAt key_at) {
    LinRegModel m;
    if (n < 2) return m;

    /* Numerically stable one-pass mean/covariance accumulation. */
    double mean_x = 0.0, mean_y = 0.0, c = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = static_cast<double>(key_at(i));
        double y = static_cast<double>(i);
        double dx = x - mean_x;
        mean_x += dx / static_cast<double>(i + 1);
        mean_y += (y - mean_y) / static_cast<double>(i + 1);
        c += dx * (y - mean_y);
        m2 += dx * (x - mean_x);
    }
    if (m2 > 0.0) {
        m.slope = c / m2;
        m.intercept = mean_y - m.slope * mean_x;
    } else {
        m.slope = 0.0;
        m.intercept = mean_y;
    }
    if (m.slope < 0.0) { // sorted input cannot slope down; paranoia against fp noise
        m.slope = 0.0;
        m.intercept = mean_y;
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t pred = m.predict(key_at(i), n);
        if (pred > i and pred - i > m.under) m.under = pred - i;
        if (i > pred and i - pred > m.over) m.over = i - pred;
    }
    return m;
}

LinRegModel fit_linreg(std::span<const key_type> keys);

/* Lower-bound searches: position of the first element >= probe, n if none.
 * All methods agree with lb_scan on any sorted view. KeyAt is an index ->
 * key accessor so the algorithms run over columnar and row layouts alike. */

template<class KeyAt>
std::size_t lb_scan(std::size_t n, key_type probe, KeyAt key_at) {
    std::size_t i = 0;
    while (i < n and key_at(i) < probe) ++i;
    return i;
}

template<class KeyAt>
std::size_t lb_binary(std::size_t n, key_type probe, KeyAt key_at) {
    std::size_t lo = 0, hi = n;
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (key_at(mid) < probe) lo = mid + 1;
        else hi = mid;
    }
    return lo;
}

/** Interpolation search. Projects the probe between the boundary keys and
 * shrinks towards it; short segments and flat segments (equal boundary keys)
 * fall back to a scan, which also guards degenerate interpolation. */
template<class KeyAt>
std::size_t lb_interpolation(std::size_t n, key_type probe, KeyAt key_at) {
    std::size_t lo = 0, hi = n;
    while (lo < hi) {
        if (hi - lo <= 8) {
            while (lo < hi and key_at(lo) < probe) ++lo;
            return lo;
        }
        key_type a = key_at(lo), b = key_at(hi - 1);
        if (a >= probe) return lo;
        if (b < probe) return hi;
        /* a < probe <= b, hence b > a and the projection is well defined. */
        auto num = static_cast<unsigned __int128>(probe - a) * (hi - 1 - lo);
        std::size_t mid = lo + static_cast<std::size_t>(num / (b - a));
        if (mid >= hi) mid = hi - 1;
        if (key_at(mid) < probe) lo = mid + 1;
        else hi = mid; // mid <= hi - 1, so this always makes progress
    }
    return lo;
}

/** Exponential search: double the probe position until it overshoots, then
 * binary search the bracketed range. */
template<class KeyAt>
std::size_t lb_exponential(std::size_t n, key_type probe, KeyAt key_at) {
    if (n == 0 or key_at(0) >= probe) return 0;
    std::size_t i = 1;
    while (i < n and key_at(i) < probe) i <<= 1;
    std::size_t lo = i / 2 + 1;
    std::size_t hi = i < n ? i + 1 : n; // answer lies in (i/2, min(i, n)]
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (key_at(mid) < probe) lo = mid + 1;
        else hi = mid;
    }
    return lo;
}

/** Predict-and-correct: start from the model prediction minus the under
 * bound, then scan forward. The bounds guarantee the start never lies past
 * the true lower bound, so stored keys are always found. */
template<class KeyAt>
std::size_t lb_linreg(std::size_t n, key_type probe, const LinRegModel &model, KeyAt key_at) {
    std::size_t pred = model.predict(probe, n);
    std::size_t i = pred > model.under ? pred - model.under : 0;
    while (i < n and key_at(i) < probe) ++i;
    return i;
}

/** Dispatch over the ordered search methods. HashS is not an ordered method
 * and is rejected; LinRegS requires a fitted model. */
template<class KeyAt>
std::size_t lower_bound_pos(std::size_t n, key_type probe, SearchMethod method,
                            const LinRegModel *model, KeyAt key_at) {
    switch (method) {
        case SearchMethod::Scan: return lb_scan(n, probe, key_at);
        case SearchMethod::BinS: return lb_binary(n, probe, key_at);
        case SearchMethod::IntS: return lb_interpolation(n, probe, key_at);
        case SearchMethod::ExpS: return lb_exponential(n, probe, key_at);
        case SearchMethod::LinRegS:
            if (model == nullptr)
                throw ContractViolation("linregS lookup without a fitted model");
            return lb_linreg(n, probe, *model, key_at);
        case SearchMethod::HashS:
            throw ContractViolation("hashS is not an ordered search method");
    }
    throw ContractViolation("unknown search method");
}

std::size_t lower_bound_pos(std::span<const key_type> keys, key_type probe,
                            SearchMethod method, const LinRegModel *model = nullptr);

} // namespace genidx
