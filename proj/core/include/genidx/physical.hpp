#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "genidx/logical.hpp"
#include "genidx/storage.hpp"

namespace genidx {

inline constexpr std::size_t default_node_capacity = 100000;

/** A physical node: the logical structure plus one concrete data layout and
 * search method for each of its RI and DT parts. */
struct PhysicalNode {
    std::optional<PartitioningFunction> part;
    std::optional<RiPart> ri; // present iff part is
    DtPart dt;

    bool routes() const {
        if (not ri) return false;
        std::size_t n = ri->size();
        for (std::size_t i = 0; i < n; ++i)
            if (not ri->targets_at(i).empty()) return true;
        return false;
    }
};

/** Reusable per-thread query state: an epoch-stamped visited set and a work
 * stack, so lookups stay allocation-free once warmed up. */
struct ExecScratch {
    std::vector<std::uint32_t> stamp;
    std::uint32_t epoch = 0;
    std::vector<node_id> stack;

    void begin(std::size_t slots) {
        if (stamp.size() < slots) stamp.resize(slots, 0);
        if (++epoch == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            epoch = 1;
        }
        stack.clear();
    }
    bool mark(node_id id) {
        if (stamp[id] == epoch) return false;
        stamp[id] = epoch;
        return true;
    }
};

enum class RangeMode : std::uint8_t { Materialize, LowerBoundOnly };

/** Structure summary used to recognize converged index shapes. */
struct IndexShape {
    std::size_t nodes = 0;
    std::size_t leaves = 0;
    std::size_t depth = 0; // levels; 1 for a single node
    std::array<std::size_t, 4> dt_layouts{};
    std::array<std::size_t, 4> ri_layouts{};

    bool single_hash_node() const {
        return nodes == 1 and dt_layouts[static_cast<std::size_t>(DataLayout::Hash)] == 1;
    }
    bool sorted_col_only() const {
        auto idx = [](DataLayout l) { return static_cast<std::size_t>(l); };
        return dt_layouts[idx(DataLayout::SortedRow)] == 0 and
               dt_layouts[idx(DataLayout::Hash)] == 0 and
               dt_layouts[idx(DataLayout::Tree)] == 0 and
               ri_layouts[idx(DataLayout::SortedRow)] == 0 and
               ri_layouts[idx(DataLayout::Tree)] == 0;
    }
};

/** A complete physical index. Immutable after construction; the query paths
 * are read-only and re-entrant given a caller-owned ExecScratch. Node ids are
 * dense slot indexes (compact() renumbers in DFS preorder). */
class PhysicalIndex {
public:
    PhysicalIndex() = default;
    explicit PhysicalIndex(std::size_t capacity_limit) : capacity_(capacity_limit) {}

    node_id add(PhysicalNode node) {
        nodes_.push_back(std::move(node));
        return static_cast<node_id>(nodes_.size() - 1);
    }

    const PhysicalNode &node(node_id id) const { return nodes_[id]; }
    PhysicalNode &node_mut(node_id id) { return nodes_[id]; }
    std::size_t node_count() const { return nodes_.size(); }

    void set_start(std::vector<node_id> sn) { start_ = std::move(sn); }
    const std::vector<node_id> &start_nodes() const { return start_; }

    std::size_t capacity_limit() const { return capacity_; }
    void set_capacity_limit(std::size_t c) { capacity_ = c; }

    /** Drops nodes unreachable from the start set and renumbers the rest in
     * DFS preorder. Mutations unlink nodes and compact afterwards. */
    void compact();

    /* Queries. */

    std::optional<payload_type> execute_point(key_type key, ExecScratch &scratch,
                                              ExecStats *stats = nullptr) const;

    /** Appends all entries with key in [l, h] to out. Output is in key order
     * unless the index routes through non-monotone partitionings. */
    void execute_range(key_type l, key_type h, ExecScratch &scratch, std::vector<Entry> &out,
                       ExecStats *stats = nullptr) const;

    /** Smallest-key entry with key in [l, h]: the lower-bound lookup a range
     * query reduces to when the data array itself handles the scan. */
    std::optional<Entry> execute_lower_bound(key_type l, key_type h, ExecScratch &scratch,
                                             ExecStats *stats = nullptr) const;

    std::vector<Entry> execute_range(key_type l, key_type h) const {
        ExecScratch scratch;
        std::vector<Entry> out;
        execute_range(l, h, scratch, out);
        return out;
    }

    /* Introspection. */

    LogicalIndex logical_view() const;
    IndexShape shape() const;

    /** First structural problem found, if any: dangling targets, cycles,
     * incompatible layout/search pairs, hash-layout nodes with children,
     * populated data sets in routing nodes, capacity violations, or routing
     * boundaries out of sync with the partitioning function. */
    std::optional<std::string> validate() const;

private:
    void route_point(const PhysicalNode &n, key_type key, std::vector<node_id> &stack) const;
    void range_rec(node_id id, key_type l, key_type h, ExecScratch &scratch,
                   std::vector<Entry> &out, ExecStats *stats) const;
    std::optional<Entry> lb_rec(node_id id, key_type l, key_type h, ExecScratch &scratch,
                                ExecStats *stats) const;

    std::vector<PhysicalNode> nodes_;
    std::vector<node_id> start_;
    std::size_t capacity_ = default_node_capacity;
};

/** DFS preorder over the reachable nodes, children in entry order, each node
 * once. The order is the canonical node order used by serialization and
 * structural hashing. */
std::vector<node_id> preorder(const PhysicalIndex &index);

} // namespace genidx
