#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "genidx/layout.hpp"
#include "genidx/logical.hpp"
#include "genidx/search.hpp"
#include "genidx/types.hpp"

namespace genidx {

/** Chained hash table with a power-of-two bucket count and load factor <= 1.
 * Slots are stored in insertion order, so a table built from sorted entries
 * iterates in key order. */
class HashTable {
public:
    HashTable() = default;

    explicit HashTable(std::span<const Entry> sorted_entries) {
        rebuild(sorted_entries);
    }

    void rebuild(std::span<const Entry> entries) {
        slots_.clear();
        slots_.reserve(entries.size());
        std::size_t buckets = 1;
        while (buckets < entries.size()) buckets <<= 1;
        mask_ = buckets - 1;
        heads_.assign(buckets, 0);
        for (const Entry &e : entries) {
            std::size_t b = mix(e.key) & mask_;
            slots_.push_back({e.key, e.payload, heads_[b]});
            heads_[b] = static_cast<std::uint32_t>(slots_.size()); // 1-based
        }
    }

    std::optional<payload_type> probe(key_type key) const {
        if (slots_.empty()) return std::nullopt;
        std::uint32_t s = heads_[mix(key) & mask_];
        while (s != 0) {
            const Slot &slot = slots_[s - 1];
            if (slot.key == key) return slot.payload;
            s = slot.next;
        }
        return std::nullopt;
    }

    std::size_t size() const { return slots_.size(); }
    bool empty() const { return slots_.empty(); }

    /** Visits all entries in insertion (= key) order. */
    template<class F>
    void for_each(F &&f) const {
        for (const Slot &s : slots_) f(s.key, s.payload);
    }

    static std::uint64_t mix(key_type key) { return splitmix64(key); }

private:
    struct Slot {
        key_type key;
        payload_type payload;
        std::uint32_t next; // 1-based, 0 terminates the chain
    };

    std::vector<std::uint32_t> heads_;
    std::vector<Slot> slots_;
    std::uint64_t mask_ = 0;
};

/** Weights of the deterministic cost model: fitness becomes a weighted count
 * of node visits, comparisons, hash probes and produced tuples instead of
 * wall-clock time, which makes search runs machine-independent and exactly
 * reproducible. */
struct CostWeights {
    double node_visit = 100.0;
    double comparison = 10.0;
    double hash_probe = 25.0;
    double tuple = 1.0;
};

/** Execution statistics, filled when a caller passes them along. Degenerate
 * events (range scans over hash nodes) are flagged here. With `weights` set,
 * the query paths also accumulate the cost model value. */
struct ExecStats {
    std::uint64_t nodes_visited = 0;
    std::uint64_t hash_range_scans = 0;
    double cost = 0.0;
    const CostWeights *weights = nullptr;
};

/** Physical realization of a node's DT part: the tuples in one concrete
 * layout plus the search method used to find them. All containers exist but
 * only the one matching `layout` is populated. */
struct DtPart {
    DataLayout layout = DataLayout::SortedCol;
    SearchMethod search = SearchMethod::BinS;

    std::vector<key_type> keys;       // SortedCol
    std::vector<payload_type> vals;   // SortedCol
    std::vector<Entry> rows;          // SortedRow
    HashTable hash;                   // Hash
    std::map<key_type, payload_type> tree; // Tree
    LinRegModel model;                // LinRegS only

    static DtPart build(DataLayout layout, SearchMethod search, std::span<const Entry> sorted);

    std::size_t size() const;
    bool empty() const { return size() == 0; }

    std::optional<payload_type> point(key_type key) const;

    /** Appends all entries with key in [l, h] to `out`, in key order for the
     * ordered layouts; hash parts degenerate to a full scan. */
    void range_into(key_type l, key_type h, std::vector<Entry> &out, ExecStats *stats) const;

    /** Smallest-key entry with key in [l, h], if any. */
    std::optional<Entry> lower_bound_entry(key_type l, key_type h, ExecStats *stats) const;

    /** Entries in key order, canonical form. */
    std::vector<Entry> canonical() const;
};

/** Physical realization of a node's RI part. The routing entries are stored
 * as parallel dom/target arrays in the chosen layout; for RangePivots nodes
 * `doms` holds the lower boundary key of each range ([0, p1, ..., pk]), for
 * bin partitionings the populated bin values. Hash is not a valid RI layout
 * since hash-layout nodes do not support child partitions. */
struct RiPart {
    DataLayout layout = DataLayout::SortedCol;
    SearchMethod search = SearchMethod::BinS;

    std::vector<key_type> doms;            // SortedCol
    std::vector<target_set> targets;       // SortedCol
    std::vector<std::pair<key_type, target_set>> rows; // SortedRow
    std::map<key_type, target_set> tree;   // Tree
    LinRegModel model;                     // LinRegS only

    static RiPart build(DataLayout layout, SearchMethod search,
                        std::vector<key_type> doms, std::vector<target_set> targets);

    std::size_t size() const;
    bool empty() const { return size() == 0; }

    key_type dom_at(std::size_t i) const;
    const target_set &targets_at(std::size_t i) const;

    /** Position of the first entry with dom >= probe (all layouts). */
    std::size_t lower_bound(key_type probe) const;

    /** Position of the last entry with dom <= probe; size() when none is.
     * This is the child slot a probe key selects in a range partitioning. */
    std::size_t predecessor(key_type probe) const;

    /** Canonical (dom, targets) pairs in dom order. */
    std::vector<std::pair<key_type, target_set>> canonical() const;

    /* Hot-path visitors. Each calls fn(node_id) per routed target. */

    /** Targets of the predecessor entry (last dom <= probe), if any. */
    template<class F>
    void visit_pred(key_type probe, F &&fn) const {
        if (layout == DataLayout::Tree) {
            auto it = tree.upper_bound(probe);
            if (it == tree.begin()) return;
            --it;
            for (node_id t : it->second) fn(t);
            return;
        }
        std::size_t pos = predecessor(probe);
        if (pos >= size()) return;
        for (node_id t : targets_ref(pos)) fn(t);
    }

    /** Targets of the exact-dom entry, if present. */
    template<class F>
    void visit_exact(key_type dom, F &&fn) const {
        if (layout == DataLayout::Tree) {
            auto it = tree.find(dom);
            if (it == tree.end()) return;
            for (node_id t : it->second) fn(t);
            return;
        }
        std::size_t pos = lower_bound(dom);
        if (pos < size() and dom_ref(pos) == dom)
            for (node_id t : targets_ref(pos)) fn(t);
    }

    /** Targets of all entries with dom in [lo_dom, hi_dom], where lo_dom is
     * resolved by predecessor semantics (range partitionings cover a probe
     * below the first boundary of its range). */
    template<class F>
    void visit_span(key_type lo_dom, key_type hi_dom, bool pred_lo, F &&fn) const {
        if (layout == DataLayout::Tree) {
            auto it = pred_lo ? tree.upper_bound(lo_dom) : tree.lower_bound(lo_dom);
            if (pred_lo and it != tree.begin()) --it;
            for (; it != tree.end() and it->first <= hi_dom; ++it)
                for (node_id t : it->second) fn(t);
            return;
        }
        std::size_t pos = pred_lo ? predecessor(lo_dom) : lower_bound(lo_dom);
        if (pred_lo and pos >= size()) pos = 0;
        for (std::size_t n = size(); pos < n and dom_ref(pos) <= hi_dom; ++pos)
            for (node_id t : targets_ref(pos)) fn(t);
    }

    /** Targets of every entry. */
    template<class F>
    void visit_all(F &&fn) const {
        if (layout == DataLayout::Tree) {
            for (const auto &[d, ts] : tree)
                for (node_id t : ts) fn(t);
            return;
        }
        for (std::size_t i = 0, n = size(); i < n; ++i)
            for (node_id t : targets_ref(i)) fn(t);
    }

    /** Walks entries in ascending dom order starting at the predecessor of
     * `probe` (or the first entry), calling fn(const target_set&) until fn
     * returns false. Used by lower-bound descents that stop early. */
    template<class F>
    void walk_from_pred(key_type probe, F &&fn) const {
        if (layout == DataLayout::Tree) {
            auto it = tree.upper_bound(probe);
            if (it != tree.begin()) --it;
            for (; it != tree.end(); ++it)
                if (not fn(it->second)) return;
            return;
        }
        std::size_t pos = predecessor(probe);
        if (pos >= size()) pos = 0;
        for (std::size_t n = size(); pos < n; ++pos)
            if (not fn(targets_ref(pos))) return;
    }

private:
    /* Contiguous-layout accessors without the tree fallback. */
    key_type dom_ref(std::size_t i) const {
        return layout == DataLayout::SortedCol ? doms[i] : rows[i].first;
    }
    const target_set &targets_ref(std::size_t i) const {
        return layout == DataLayout::SortedCol ? targets[i] : rows[i].second;
    }
};

} // namespace genidx
