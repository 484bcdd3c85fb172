#include "genidx/partition.hpp"

#include <algorithm>
#include <cmath>

namespace genidx {

std::uint64_t PartitioningFunction::apply(key_type key) const {
    return std::visit([key](const auto &f) -> std::uint64_t {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, RangePivots>) {
            /* Ordinal of the containing range: number of pivots <= key. */
            return static_cast<std::uint64_t>(
                std::upper_bound(f.pivots.begin(), f.pivots.end(), key) - f.pivots.begin());
        } else if constexpr (std::is_same_v<T, LinearModel>) {
            double pos = f.slope * static_cast<double>(key) + f.intercept;
            if (not (pos > 0.0)) return 0; // also catches NaN
            if (pos >= static_cast<double>(f.bins)) return f.bins - 1;
            auto bin = static_cast<std::uint64_t>(pos);
            return bin >= f.bins ? f.bins - 1 : bin;
        } else if constexpr (std::is_same_v<T, BitSuffix>) {
            return key & bit_mask(f.width);
        } else {
            static_assert(std::is_same_v<T, BitPrefix>);
            unsigned shift = 64u - f.start - f.width;
            return (key >> shift) & bit_mask(f.width);
        }
    }, fn_);
}

std::optional<std::uint64_t> PartitioningFunction::domain_size() const {
    return std::visit([](const auto &f) -> std::optional<std::uint64_t> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, RangePivots>) {
            return f.pivots.size() + 1;
        } else if constexpr (std::is_same_v<T, LinearModel>) {
            return f.bins;
        } else if constexpr (std::is_same_v<T, BitSuffix>) {
            if (f.width >= 64) return std::nullopt;
            return 1ULL << f.width;
        } else {
            static_assert(std::is_same_v<T, BitPrefix>);
            if (f.width >= 64) return std::nullopt;
            return 1ULL << f.width;
        }
    }, fn_);
}

bool PartitioningFunction::monotone() const {
    return std::visit([](const auto &f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, RangePivots>) return true;
        else if constexpr (std::is_same_v<T, LinearModel>) return f.slope >= 0.0;
        else if constexpr (std::is_same_v<T, BitSuffix>) return f.width >= 64;
        else return f.start == 0;
    }, fn_);
}

bool PartitioningFunction::routing_compatible(const PartitioningFunction &other) const {
    if (is_range_pivots() and other.is_range_pivots()) return true;
    return fn_ == other.fn_;
}

void PartitioningFunction::validate() const {
    std::visit([](const auto &f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, RangePivots>) {
            for (std::size_t i = 1; i < f.pivots.size(); ++i)
                if (not (f.pivots[i - 1] < f.pivots[i]))
                    throw ContractViolation("range pivots must be strictly increasing");
        } else if constexpr (std::is_same_v<T, LinearModel>) {
            if (f.bins < 1)
                throw ContractViolation("linear model needs at least one bin");
            if (std::isnan(f.slope) or std::isnan(f.intercept))
                throw ContractViolation("linear model parameters must be finite");
        } else if constexpr (std::is_same_v<T, BitSuffix>) {
            if (f.width < 1 or f.width > 64)
                throw ContractViolation("bit suffix width must be in [1, 64]");
        } else {
            static_assert(std::is_same_v<T, BitPrefix>);
            if (f.width < 1 or f.start + f.width > 64)
                throw ContractViolation("bit prefix window must fit in 64 bits");
        }
    }, fn_);
}

} // namespace genidx
