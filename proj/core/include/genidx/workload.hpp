#pragma once

#include <string>
#include <vector>

#include "genidx/dataset.hpp"
#include "genidx/types.hpp"

namespace genidx {

/** One read query: the closed key interval [lo, hi]; lo == hi is a point
 * query. Queries are generated from index positions of a dataset, so every
 * point query probes a stored key. */
struct Query {
    key_type lo = 0;
    key_type hi = 0;

    bool is_point() const { return lo == hi; }
    friend bool operator==(const Query&, const Query&) = default;
};

struct Workload {
    std::string name;
    std::vector<Query> queries;
    std::uint64_t dataset_fingerprint = 0;

    std::size_t size() const { return queries.size(); }
    std::uint64_t fingerprint() const;
};

/** Uniform point queries over dataset positions [idx_min, idx_max). Queries
 * may repeat; the draw is with replacement. */
Workload gen_point_workload(const Dataset &ds, std::size_t idx_min, std::size_t idx_max,
                            std::size_t count, std::uint64_t seed);

inline Workload gen_point_workload(const Dataset &ds, std::size_t count, std::uint64_t seed) {
    return gen_point_workload(ds, 0, ds.size(), count, seed);
}

/** Point queries with normally distributed positions (mean and deviation in
 * index units), clamped to the dataset domain. */
Workload gen_point_normal_workload(const Dataset &ds, double mean_idx, double stddev_idx,
                                   std::size_t count, std::uint64_t seed);

/** Range queries of fixed selectivity: each covers exactly
 * round(n * sel) consecutive dataset ranks (at least one), the lower rank
 * drawn uniformly from [idx_min, idx_max - span]. Executing such a query
 * returns exactly that many tuples. */
Workload gen_range_workload(const Dataset &ds, double sel, std::size_t idx_min,
                            std::size_t idx_max, std::size_t count, std::uint64_t seed);

inline Workload gen_range_workload(const Dataset &ds, double sel, std::size_t count,
                                   std::uint64_t seed) {
    return gen_range_workload(ds, sel, 0, ds.size(), count, seed);
}

/* Mixed workloads: proportions align with the concatenation of point specs
 * and range specs and must sum to 1. The result interleaves all parts in
 * shuffled order. */

struct PointSpec {
    std::size_t idx_min = 0, idx_max = 0; // idx_max == 0 means "whole dataset"
};

struct RangeSpec {
    double sel = 0.0;
    std::size_t idx_min = 0, idx_max = 0;
};

Workload gen_mix_workload(const Dataset &ds, const std::vector<PointSpec> &points,
                          const std::vector<RangeSpec> &ranges,
                          const std::vector<double> &proportions, std::size_t count,
                          std::uint64_t seed);

/** The three-partition benchmark mix: point queries on [0, 0.1n), [0.1n,
 * 0.85n) and [0.85n, n) with 20/10/50% of the volume, range queries on the
 * middle partition with the remaining 20%. */
Workload gen_three_partition_mix(const Dataset &ds, double range_sel, std::size_t count,
                                 std::uint64_t seed);

/** CSV export for audits: header plus one row per query. */
void save_workload_csv(const Workload &wl, const std::string &path);

} // namespace genidx
