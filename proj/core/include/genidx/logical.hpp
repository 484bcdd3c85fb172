#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "genidx/partition.hpp"
#include "genidx/types.hpp"

namespace genidx {

/* Node references of one routing entry, kept sorted and unique. */
using target_set = std::vector<node_id>;

/** One mapping of the routing information: a partition-domain value and the
 * set of nodes it routes to. Domain values that appear in no entry map to the
 * empty set. For nodes partitioned by RangePivots the entries are kept
 * aligned with the induced ranges (entry i covers range i and dom == i); for
 * bin partitionings the entries are sparse and sorted by dom. */
struct RoutingEntry {
    std::uint64_t dom = 0;
    target_set targets;

    friend bool operator==(const RoutingEntry&, const RoutingEntry&) = default;
};

struct RoutingInformation {
    std::vector<RoutingEntry> entries;

    bool empty_targets() const {
        for (const auto &e : entries)
            if (not e.targets.empty()) return false;
        return true;
    }
    friend bool operator==(const RoutingInformation&, const RoutingInformation&) = default;
};

/** A logical node: partitioning function, routing information and data set.
 * Routing requires a partitioning function; internal nodes (nodes that route
 * somewhere) keep their data set empty in this implementation. */
struct LogicalNode {
    node_id id = 0;
    std::optional<PartitioningFunction> part;
    std::optional<RoutingInformation> routing;
    std::vector<Entry> data; // sorted by key

    bool routes() const { return routing and not routing->empty_targets(); }
};

/** A graph of logical nodes plus the start nodes queries enter through.
 * Completeness (every routed-to node exists) and acyclicity are required for
 * query evaluation; both are checked by the free functions below. */
class LogicalIndex {
public:
    LogicalIndex() = default;

    LogicalNode &add(LogicalNode node);
    const LogicalNode *find(node_id id) const;
    const std::map<node_id, LogicalNode> &nodes() const { return nodes_; }
    std::map<node_id, LogicalNode> &nodes() { return nodes_; }

    void set_start_nodes(std::vector<node_id> sn) { start_ = std::move(sn); }
    const std::vector<node_id> &start_nodes() const { return start_; }

private:
    std::map<node_id, LogicalNode> nodes_;
    std::vector<node_id> start_;
};

/** Result set of the range query l <= key <= h evaluated from `start`,
 * sorted by key with duplicates removed. Nodes are visited at most once even
 * when several domain values route to the same node. Throws ContractViolation
 * for unknown start node ids. */
std::vector<Entry> range_query(const LogicalIndex &index, std::span<const node_id> start,
                               key_type l, key_type h);

inline std::vector<Entry> range_query(const LogicalIndex &index, key_type l, key_type h) {
    return range_query(index, index.start_nodes(), l, h);
}

/** True iff every routing target is a member of the node set. */
bool check_complete(const LogicalIndex &index);

/** True iff the reachability graph from the start nodes is acyclic and covers
 * every node of the index. */
bool check_reachable_dag(const LogicalIndex &index);

/** Counterexample returned by a failed correctness check. */
struct RangeCounterexample {
    key_type l = 0, h = 0;
};

struct CorrectnessOptions {
    /* Exhaustive mode checks every (l, h) pair over the grid of distinct
     * dataset keys plus sentinels below the minimum and above the maximum;
     * query results only change at data keys, so the finite grid decides the
     * universally quantified definition. Sampled mode draws `sample_pairs`
     * grid pairs (half of them point queries) for large datasets. */
    bool exhaustive = true;
    std::size_t sample_pairs = 10000;
    std::uint64_t seed = 0x9d1ce5f0a7ULL;
};

/** Searches for an (l, h) grid pair where the queried result differs from
 * the brute-force filter of `dataset`. `fill` receives (l, h, out&) and
 * appends the matching entries in any order. Returns the first violation
 * found, or nullopt. */
template<class FillFn>
std::optional<RangeCounterexample>
find_range_violation(const std::vector<Entry> &dataset, FillFn &&fill,
                     const CorrectnessOptions &opt = {});

/** Def-2.4-style correctness of a logical index: range_query agrees with the
 * brute-force filter of `dataset` for every grid pair. */
std::optional<RangeCounterexample>
find_correctness_violation(const LogicalIndex &index, const std::vector<Entry> &dataset,
                           const CorrectnessOptions &opt = {});

inline bool check_correct(const LogicalIndex &index, const std::vector<Entry> &dataset,
                          const CorrectnessOptions &opt = {}) {
    return not find_correctness_violation(index, dataset, opt).has_value();
}

/* Implementation of the generic grid driver; kept in the header so physical
 * indexes and tests can plug in their own query paths. */
namespace detail {

std::vector<key_type> correctness_grid(const std::vector<Entry> &dataset);

std::vector<std::pair<std::uint32_t, std::uint32_t>>
sample_grid_pairs(std::size_t grid_size, std::size_t pairs, std::uint64_t seed);

} // namespace detail

template<class FillFn>
std::optional<RangeCounterexample>
find_range_violation(const std::vector<Entry> &dataset, FillFn &&fill,
                     const CorrectnessOptions &opt) {
    std::vector<Entry> sorted = dataset;
    std::sort(sorted.begin(), sorted.end());

    const std::vector<key_type> grid = detail::correctness_grid(sorted);

    std::vector<Entry> got;
    auto check_pair = [&](key_type l, key_type h) -> bool {
        got.clear();
        fill(l, h, got);
        /* Sorted, duplicate-free output is the common case; repair otherwise. */
        bool canonical = true;
        for (std::size_t i = 1; i < got.size(); ++i)
            if (not (got[i - 1].key < got[i].key)) { canonical = false; break; }
        if (not canonical) {
            std::sort(got.begin(), got.end(), [](const Entry &a, const Entry &b) {
                return a.key < b.key or (a.key == b.key and a.payload < b.payload);
            });
            got.erase(std::unique(got.begin(), got.end()), got.end());
        }
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), l,
                                   [](const Entry &e, key_type k) { return e.key < k; });
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), h,
                                   [](key_type k, const Entry &e) { return k < e.key; });
        return std::equal(got.begin(), got.end(), lo, hi);
    };

    if (grid.empty()) {
        if (not check_pair(0, ~0ULL)) return RangeCounterexample{0, ~0ULL};
        return std::nullopt;
    }

    if (opt.exhaustive) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t j = i; j < grid.size(); ++j)
                if (not check_pair(grid[i], grid[j]))
                    return RangeCounterexample{grid[i], grid[j]};
        return std::nullopt;
    }

    for (auto [i, j] : detail::sample_grid_pairs(grid.size(), opt.sample_pairs, opt.seed))
        if (not check_pair(grid[i], grid[j]))
            return RangeCounterexample{grid[i], grid[j]};
    return std::nullopt;
}

} // namespace genidx
