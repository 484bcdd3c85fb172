#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "genidx/types.hpp"

namespace genidx {

/* Partitioning functions map a key to a value of the partition domain D,
 * represented uniformly as a 64-bit integer:
 *   - RangePivots: the ordinal of the half-open key range the key falls in,
 *     k pivots inducing the k+1 ranges [0,p1), [p1,p2), ..., [pk,2^64).
 *   - LinearModel: the bin index clamp(floor(slope*key + intercept), 0, bins-1).
 *   - BitSuffix:   the lowest `width` bits of the key.
 *   - BitPrefix:   `width` bits starting `start` bits below the MSB.
 */

struct RangePivots {
    std::vector<key_type> pivots; // strictly increasing

    friend bool operator==(const RangePivots&, const RangePivots&) = default;
};

struct LinearModel {
    double slope = 0.0;
    double intercept = 0.0;
    std::uint64_t bins = 1;

    friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

struct BitSuffix {
    unsigned width = 1; // in [1, 64]

    friend bool operator==(const BitSuffix&, const BitSuffix&) = default;
};

struct BitPrefix {
    unsigned start = 0; // offset from the most significant bit
    unsigned width = 1; // start + width <= 64

    friend bool operator==(const BitPrefix&, const BitPrefix&) = default;
};

class PartitioningFunction {
public:
    using Variant = std::variant<RangePivots, LinearModel, BitSuffix, BitPrefix>;

    PartitioningFunction() : fn_(RangePivots{}) {}
    PartitioningFunction(RangePivots rp) : fn_(std::move(rp)) { validate(); }
    PartitioningFunction(LinearModel lm) : fn_(lm) { validate(); }
    PartitioningFunction(BitSuffix bs) : fn_(bs) { validate(); }
    PartitioningFunction(BitPrefix bp) : fn_(bp) { validate(); }

    const Variant &variant() const { return fn_; }

    bool is_range_pivots() const { return std::holds_alternative<RangePivots>(fn_); }
    const RangePivots *range_pivots() const { return std::get_if<RangePivots>(&fn_); }

    /** Total over the key domain: every key maps to exactly one domain value. */
    std::uint64_t apply(key_type key) const;

    /** Number of domain values with a known finite bound, if any.
     * RangePivots: pivots+1 ranges; LinearModel: bins; BitSuffix/Prefix: 2^width. */
    std::optional<std::uint64_t> domain_size() const;

    /** True if keys in ascending order map to non-decreasing domain values.
     * Range queries on monotone functions can prune routing entries to the
     * interval [apply(l), apply(h)]; non-monotone functions (bit suffixes,
     * inner bit slices) must follow every entry. */
    bool monotone() const;

    /** Whether two functions partition the same domain in a way that allows
     * routing entries of one node to be spliced into another (merges M3/M5).
     * Range partitionings always share the raw key domain; bin partitionings
     * only line up when their parameters are identical. */
    bool routing_compatible(const PartitioningFunction &other) const;

    friend bool operator==(const PartitioningFunction&, const PartitioningFunction&) = default;

private:
    void validate() const;

    Variant fn_;
};

inline std::uint64_t bit_mask(unsigned width) {
    return width >= 64 ? ~0ULL : ((1ULL << width) - 1ULL);
}

} // namespace genidx
