#include "genidx/mutation.hpp"

#include <algorithm>
#include <cassert>

#include "genidx/rng.hpp"

namespace genidx {

namespace {

/*----------------------------------------------------------------------------
 * Canonical routing edits
 *
 * Mutations manipulate routing as (dom, targets) vectors and write the result
 * back through write_routing, which re-syncs the pivots of range-partitioned
 * nodes and coalesces adjacent ranges with identical targets (merging the
 * entry (0,6) with [6,11) into (0,11) is exactly such a coalesce).
 *--------------------------------------------------------------------------*/

struct RouteView {
    std::vector<key_type> doms;
    std::vector<target_set> targets;

    std::size_t size() const { return doms.size(); }
};

RouteView route_view(const PhysicalNode &n) {
    RouteView v;
    if (not n.ri) return v;
    for (auto &[dom, ts] : n.ri->canonical()) {
        v.doms.push_back(dom);
        v.targets.push_back(ts);
    }
    return v;
}

void sort_unique(target_set &ts) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

bool is_range_node(const PhysicalNode &n) {
    return n.part and n.part->is_range_pivots();
}

void write_routing(PhysicalNode &n, RouteView v, DataLayout layout, SearchMethod search,
                   bool range_partitioned) {
    for (target_set &ts : v.targets) sort_unique(ts);
    if (range_partitioned) {
        RouteView packed;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (not packed.doms.empty() and packed.targets.back() == v.targets[i])
                continue; // same targets as the range to the left: coalesce
            packed.doms.push_back(v.doms[i]);
            packed.targets.push_back(std::move(v.targets[i]));
        }
        v = std::move(packed);
        RangePivots rp;
        rp.pivots.assign(v.doms.begin() + 1, v.doms.end());
        n.part = PartitioningFunction(std::move(rp));
    }
    n.ri = RiPart::build(layout, search, std::move(v.doms), std::move(v.targets));
}

/** Index of the range containing `key` (doms[0] == 0, so it always exists
 * for non-empty range views). */
std::size_t view_pred(const RouteView &v, key_type key) {
    auto it = std::upper_bound(v.doms.begin(), v.doms.end(), key);
    return static_cast<std::size_t>(it - v.doms.begin()) - 1;
}

/** Pointwise union of two range routings: boundaries are refined to the
 * union of both boundary sets, each refined range unions the targets of the
 * covering ranges on both sides. */
RouteView union_range_views(const RouteView &a, const RouteView &b) {
    std::vector<key_type> bounds;
    std::set_union(a.doms.begin(), a.doms.end(), b.doms.begin(), b.doms.end(),
                   std::back_inserter(bounds));
    RouteView out;
    for (key_type bound : bounds) {
        target_set ts;
        if (not a.doms.empty()) {
            const target_set &at = a.targets[view_pred(a, bound)];
            ts.insert(ts.end(), at.begin(), at.end());
        }
        if (not b.doms.empty()) {
            const target_set &bt = b.targets[view_pred(b, bound)];
            ts.insert(ts.end(), bt.begin(), bt.end());
        }
        out.doms.push_back(bound);
        out.targets.push_back(std::move(ts));
    }
    return out;
}

/** Pointwise union of two bin routings (sparse merge by dom). */
RouteView union_bin_views(const RouteView &a, const RouteView &b) {
    RouteView out;
    std::size_t i = 0, j = 0;
    while (i < a.size() or j < b.size()) {
        if (j >= b.size() or (i < a.size() and a.doms[i] < b.doms[j])) {
            out.doms.push_back(a.doms[i]);
            out.targets.push_back(a.targets[i]);
            ++i;
        } else if (i >= a.size() or b.doms[j] < a.doms[i]) {
            out.doms.push_back(b.doms[j]);
            out.targets.push_back(b.targets[j]);
            ++j;
        } else {
            target_set ts = a.targets[i];
            ts.insert(ts.end(), b.targets[j].begin(), b.targets[j].end());
            out.doms.push_back(a.doms[i]);
            out.targets.push_back(std::move(ts));
            ++i; ++j;
        }
    }
    return out;
}

/** Replaces `child` inside a range routing by a key-range replacement map
 * (`repl.doms[0] == 0`). Every entry that routed to `child` is refined at the
 * replacement boundaries falling inside its span; the pieces route to the
 * replacement targets plus whatever else the entry routed to. */
RouteView splice_range(const RouteView &parent, node_id child, const RouteView &repl) {
    RouteView out;
    for (std::size_t i = 0; i < parent.size(); ++i) {
        bool has_child = std::find(parent.targets[i].begin(), parent.targets[i].end(), child)
                         != parent.targets[i].end();
        if (not has_child) {
            out.doms.push_back(parent.doms[i]);
            out.targets.push_back(parent.targets[i]);
            continue;
        }
        target_set rest;
        for (node_id t : parent.targets[i])
            if (t != child) rest.push_back(t);
        bool has_hi = i + 1 < parent.size();
        key_type hi = has_hi ? parent.doms[i + 1] : 0;

        std::size_t j = view_pred(repl, parent.doms[i]);
        target_set first = rest;
        first.insert(first.end(), repl.targets[j].begin(), repl.targets[j].end());
        out.doms.push_back(parent.doms[i]);
        out.targets.push_back(std::move(first));
        while (j + 1 < repl.size() and (not has_hi or repl.doms[j + 1] < hi)) {
            ++j;
            target_set ts = rest;
            ts.insert(ts.end(), repl.targets[j].begin(), repl.targets[j].end());
            out.doms.push_back(repl.doms[j]);
            out.targets.push_back(std::move(ts));
        }
    }
    return out;
}

/** Replaces `child` by the node set `with` in every entry. */
void retarget(RouteView &v, node_id child, const target_set &with) {
    for (target_set &ts : v.targets) {
        auto it = std::find(ts.begin(), ts.end(), child);
        if (it == ts.end()) continue;
        ts.erase(it);
        ts.insert(ts.end(), with.begin(), with.end());
    }
}

bool parts_compatible(const PhysicalNode &a, const PhysicalNode &b) {
    if (not a.part and not b.part) return true;
    if (a.part and b.part) return a.part->routing_compatible(*b.part);
    return false;
}

bool contains(const std::vector<node_id> &v, node_id id) {
    return std::find(v.begin(), v.end(), id) != v.end();
}

/** Mutations only operate on tree-structured indexes: applications that
 * would hand a node a second parent (entry-run splits can separate entries
 * sharing a target) are aborted. */
bool tree_shaped(const PhysicalIndex &idx) {
    std::vector<node_id> parent(idx.node_count(), ~node_id(0));
    for (node_id p = 0; p < idx.node_count(); ++p) {
        const PhysicalNode &n = idx.node(p);
        if (not n.ri) continue;
        n.ri->visit_all([&](node_id c) {
            if (parent[c] == ~node_id(0) or parent[c] == p) parent[c] = p;
            else parent[c] = p | 0x80000000u; // poison marker; checked below
        });
    }
    for (node_id p = 0; p < idx.node_count(); ++p) {
        const PhysicalNode &n = idx.node(p);
        if (not n.ri) continue;
        bool ok = true;
        n.ri->visit_all([&](node_id c) {
            if ((parent[c] & 0x80000000u) != 0) ok = false;
        });
        if (not ok) return false;
    }
    return true;
}

std::vector<Entry> merge_entries(std::vector<Entry> a, const std::vector<Entry> &b) {
    std::vector<Entry> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DtPart empty_inner_dt() {
    return DtPart::build(DataLayout::SortedCol, SearchMethod::Scan, {});
}

NodePart live_part(const PhysicalNode &n) {
    return n.routes() ? NodePart::Routing : NodePart::Data;
}

/** Weighted (layout, search) pair over the valid support. */
std::optional<PhysicalChoice> draw_valid_pair(const MutationDistributions &dists,
                                              std::mt19937_64 &rng, bool allow_hash) {
    std::vector<PhysicalChoice> support;
    std::vector<double> weights;
    for (DataLayout l : all_layouts) {
        if (not allow_hash and l == DataLayout::Hash) continue;
        double wl = dists.layout_weight(l);
        if (not (wl > 0.0)) continue;
        for (SearchMethod s : compatible_methods(l)) {
            double ws = dists.search_weight(s);
            if (not (ws > 0.0)) continue;
            support.push_back({l, s});
            weights.push_back(wl * ws);
        }
    }
    std::size_t pick = pick_weighted(rng, weights);
    if (pick == static_cast<std::size_t>(-1)) return std::nullopt;
    return support[pick];
}

std::optional<SearchMethod> draw_search_for(const MutationDistributions &dists,
                                            std::mt19937_64 &rng, DataLayout layout,
                                            std::optional<SearchMethod> exclude = {}) {
    std::vector<SearchMethod> support;
    std::vector<double> weights;
    for (SearchMethod s : compatible_methods(layout)) {
        if (exclude and s == *exclude) continue;
        double w = dists.search_weight(s);
        if (not (w > 0.0)) continue;
        support.push_back(s);
        weights.push_back(w);
    }
    std::size_t pick = pick_weighted(rng, weights);
    if (pick == static_cast<std::size_t>(-1)) return std::nullopt;
    return support[pick];
}

/** The drawn choice if it fits the part it will realize, else a redraw from
 * the restricted support ("draw a new method to ensure correctness"). */
std::optional<PhysicalChoice> fit_choice(PhysicalChoice choice, bool allow_hash,
                                         const MutationDistributions &dists,
                                         std::mt19937_64 &rng) {
    if ((allow_hash or choice.layout != DataLayout::Hash) and
        compatible(choice.layout, choice.search))
        return choice;
    return draw_valid_pair(dists, rng, allow_hash);
}

} // namespace

std::vector<node_id> children_of(const PhysicalIndex &index, node_id id) {
    std::vector<node_id> out;
    const PhysicalNode &n = index.node(id);
    if (not n.ri) return out;
    n.ri->visit_all([&](node_id t) {
        if (not contains(out, t)) out.push_back(t);
    });
    return out;
}

/*----------------------------------------------------------------------------
 * M1 / M2: physical choice swaps
 *--------------------------------------------------------------------------*/

std::optional<PhysicalIndex> m1_change_layout(const PhysicalIndex &index, node_id node,
                                              NodePart part, DataLayout new_layout,
                                              std::mt19937_64 &rng,
                                              const MutationDistributions &dists) {
    if (node >= index.node_count()) return std::nullopt;
    PhysicalIndex out = index;
    PhysicalNode &n = out.node_mut(node);

    if (part == NodePart::Routing) {
        if (not n.ri) return std::nullopt;
        if (new_layout == n.ri->layout or new_layout == DataLayout::Hash) return std::nullopt;
        SearchMethod search = n.ri->search;
        if (not compatible(new_layout, search)) {
            auto redrawn = draw_search_for(dists, rng, new_layout);
            if (not redrawn) return std::nullopt;
            search = *redrawn;
        }
        RouteView v = route_view(n);
        n.ri = RiPart::build(new_layout, search, std::move(v.doms), std::move(v.targets));
    } else {
        if (new_layout == n.dt.layout) return std::nullopt;
        if (n.routes() and new_layout == DataLayout::Hash)
            return std::nullopt; // no child partitions under a hash layout
        SearchMethod search = n.dt.search;
        if (not compatible(new_layout, search)) {
            auto redrawn = draw_search_for(dists, rng, new_layout);
            if (not redrawn) return std::nullopt;
            search = *redrawn;
        }
        n.dt = DtPart::build(new_layout, search, n.dt.canonical());
    }
    return out;
}

std::optional<PhysicalIndex> m2_change_search(const PhysicalIndex &index, node_id node,
                                              NodePart part, SearchMethod new_search) {
    if (node >= index.node_count()) return std::nullopt;
    PhysicalIndex out = index;
    PhysicalNode &n = out.node_mut(node);

    if (part == NodePart::Routing) {
        if (not n.ri) return std::nullopt;
        if (new_search == n.ri->search or not compatible(n.ri->layout, new_search))
            return std::nullopt;
        RouteView v = route_view(n);
        n.ri = RiPart::build(n.ri->layout, new_search, std::move(v.doms), std::move(v.targets));
    } else {
        if (new_search == n.dt.search or not compatible(n.dt.layout, new_search))
            return std::nullopt;
        n.dt = DtPart::build(n.dt.layout, new_search, n.dt.canonical());
    }
    return out;
}

/*----------------------------------------------------------------------------
 * M3: merge siblings horizontally
 *--------------------------------------------------------------------------*/

namespace {

bool merge_one_sibling(PhysicalIndex &idx, node_id parent, node_id target, node_id source) {
    if (target == source or parent == target or parent == source) return false;
    std::vector<node_id> kids = children_of(idx, parent);
    if (kids.size() < 2 or not contains(kids, target) or not contains(kids, source)) return false;

    const PhysicalNode &t = idx.node(target);
    const PhysicalNode &s = idx.node(source);
    if (t.routes() != s.routes()) return false;
    if (not parts_compatible(t, s)) return false;

    if (not t.routes()) {
        std::vector<Entry> merged = merge_entries(t.dt.canonical(), s.dt.canonical());
        if (merged.size() > idx.capacity_limit()) return false;
        PhysicalNode &tm = idx.node_mut(target);
        tm.dt = DtPart::build(tm.dt.layout, tm.dt.search, merged);
    } else {
        if (not t.dt.empty() or not s.dt.empty()) return false;
        RouteView merged = is_range_node(t)
            ? union_range_views(route_view(t), route_view(s))
            : union_bin_views(route_view(t), route_view(s));
        if (merged.size() > idx.capacity_limit()) return false;
        PhysicalNode &tm = idx.node_mut(target);
        write_routing(tm, std::move(merged), tm.ri->layout, tm.ri->search, is_range_node(tm));
    }

    PhysicalNode &p = idx.node_mut(parent);
    RouteView pv = route_view(p);
    retarget(pv, source, {target});
    write_routing(p, std::move(pv), p.ri->layout, p.ri->search, is_range_node(p));
    return true;
}

} // namespace

std::optional<PhysicalIndex> m3_merge_horizontal(const PhysicalIndex &index, node_id parent,
                                                 node_id target, std::span<const node_id> sources) {
    if (sources.empty() or parent >= index.node_count() or target >= index.node_count())
        return std::nullopt;
    PhysicalIndex out = index;
    for (node_id source : sources) {
        if (source >= out.node_count()) return std::nullopt;
        if (not merge_one_sibling(out, parent, target, source)) return std::nullopt;
    }
    out.compact();
    if (not tree_shaped(out)) return std::nullopt;
    return out;
}

/*----------------------------------------------------------------------------
 * M4: split a child horizontally into k siblings
 *--------------------------------------------------------------------------*/

std::optional<PhysicalIndex> m4_split_horizontal(const PhysicalIndex &index, node_id parent,
                                                 node_id child, std::size_t k,
                                                 std::mt19937_64 &rng,
                                                 const MutationDistributions &dists,
                                                 std::optional<PhysicalChoice> choice) {
    if (k < 2 or parent >= index.node_count() or child >= index.node_count()) return std::nullopt;
    PhysicalIndex out = index;
    if (not contains(children_of(out, parent), child)) return std::nullopt;

    const PhysicalNode &c = out.node(child);
    bool parent_range = is_range_node(out.node(parent));
    std::vector<node_id> pieces;
    RouteView repl; // key-range replacement map for range-partitioned parents
    bool repl_valid = false;

    if (not c.routes()) {
        std::vector<Entry> data = c.dt.canonical();
        if (data.size() < k) return std::nullopt;
        auto pick = fit_choice(choice.value_or(PhysicalChoice{c.dt.layout, c.dt.search}),
                               /*allow_hash=*/true, dists, rng);
        if (not pick) return std::nullopt;
        for (std::size_t r = 0; r < k; ++r) {
            std::size_t lo = r * data.size() / k;
            std::size_t hi = (r + 1) * data.size() / k;
            PhysicalNode leaf;
            leaf.dt = DtPart::build(pick->layout, pick->search,
                                    std::span<const Entry>(data.data() + lo, hi - lo));
            pieces.push_back(out.add(std::move(leaf)));
            repl.doms.push_back(r == 0 ? 0 : data[lo].key);
            repl.targets.push_back({pieces.back()});
        }
        repl_valid = true;
    } else {
        RouteView cv = route_view(c);
        if (cv.size() < k or not c.dt.empty()) return std::nullopt;
        bool child_range = is_range_node(c);
        PartitioningFunction child_part = *c.part; // adding nodes invalidates c
        auto pick = fit_choice(choice.value_or(PhysicalChoice{c.ri->layout, c.ri->search}),
                               /*allow_hash=*/false, dists, rng);
        if (not pick) return std::nullopt;
        for (std::size_t r = 0; r < k; ++r) {
            std::size_t lo = r * cv.size() / k;
            std::size_t hi = (r + 1) * cv.size() / k;
            RouteView run;
            run.doms.assign(cv.doms.begin() + lo, cv.doms.begin() + hi);
            run.targets.assign(cv.targets.begin() + lo, cv.targets.begin() + hi);
            key_type span_lo = run.doms.front();
            if (child_range) run.doms.front() = 0; // first range is open below
            PhysicalNode piece;
            piece.part = child_range
                ? PartitioningFunction(RangePivots{{run.doms.begin() + 1, run.doms.end()}})
                : child_part;
            piece.ri = RiPart::build(pick->layout, pick->search,
                                     std::move(run.doms), std::move(run.targets));
            piece.dt = empty_inner_dt();
            pieces.push_back(out.add(std::move(piece)));
            repl.doms.push_back(r == 0 ? 0 : span_lo);
            repl.targets.push_back({pieces.back()});
        }
        repl_valid = child_range;
    }

    PhysicalNode &p = out.node_mut(parent);
    RouteView pv = route_view(p);
    if (parent_range and repl_valid) {
        pv = splice_range(pv, child, repl);
    } else {
        target_set all(pieces.begin(), pieces.end());
        retarget(pv, child, all);
    }
    if (pv.size() > out.capacity_limit()) return std::nullopt;
    write_routing(p, std::move(pv), p.ri->layout, p.ri->search, parent_range);
    out.compact();
    if (not tree_shaped(out)) return std::nullopt;
    return out;
}

/*----------------------------------------------------------------------------
 * M5: merge a child vertically into its parent
 *--------------------------------------------------------------------------*/

std::optional<PhysicalIndex> m5_merge_vertical(const PhysicalIndex &index, node_id parent,
                                               node_id child) {
    if (parent >= index.node_count() or child >= index.node_count() or parent == child)
        return std::nullopt;
    PhysicalIndex out = index;
    std::vector<node_id> kids = children_of(out, parent);
    if (not contains(kids, child)) return std::nullopt;

    const PhysicalNode &c = out.node(child);
    if (not c.routes()) {
        /* A leaf child collapses into the parent only when the parent routes
         * nowhere else; the pair then becomes a single data node. */
        if (kids.size() != 1) return std::nullopt;
        std::vector<Entry> merged =
            merge_entries(out.node(parent).dt.canonical(), c.dt.canonical());
        if (merged.size() > out.capacity_limit()) return std::nullopt;
        PhysicalNode &p = out.node_mut(parent);
        p.dt = DtPart::build(c.dt.layout, c.dt.search, merged);
        p.part.reset();
        p.ri.reset();
    } else {
        const PhysicalNode &p = out.node(parent);
        if (not parts_compatible(p, c) or not p.part or not c.part) return std::nullopt;
        if (not c.dt.empty()) return std::nullopt;
        RouteView pv = route_view(p);
        RouteView cv = route_view(c);
        if (is_range_node(p)) {
            pv = splice_range(pv, child, cv);
        } else {
            /* Identical bin partitionings: splice pointwise by dom. */
            for (std::size_t i = 0; i < pv.size(); ++i) {
                auto it = std::find(pv.targets[i].begin(), pv.targets[i].end(), child);
                if (it == pv.targets[i].end()) continue;
                pv.targets[i].erase(it);
                auto dom_it = std::lower_bound(cv.doms.begin(), cv.doms.end(), pv.doms[i]);
                if (dom_it != cv.doms.end() and *dom_it == pv.doms[i]) {
                    const target_set &ct =
                        cv.targets[static_cast<std::size_t>(dom_it - cv.doms.begin())];
                    pv.targets[i].insert(pv.targets[i].end(), ct.begin(), ct.end());
                }
            }
        }
        if (pv.size() > out.capacity_limit()) return std::nullopt;
        PhysicalNode &pm = out.node_mut(parent);
        write_routing(pm, std::move(pv), pm.ri->layout, pm.ri->search, is_range_node(pm));
    }
    out.compact();
    if (not tree_shaped(out)) return std::nullopt;
    return out;
}

/*----------------------------------------------------------------------------
 * M6: split a node vertically (k parts; k-1 new children below)
 *--------------------------------------------------------------------------*/

std::optional<PhysicalIndex> m6_split_vertical(const PhysicalIndex &index, node_id node,
                                               std::size_t k, std::mt19937_64 &rng,
                                               const MutationDistributions &dists,
                                               std::optional<PhysicalChoice> choice) {
    if (k < 2 or node >= index.node_count()) return std::nullopt;
    PhysicalIndex out = index;
    const PhysicalNode &n = out.node(node);
    std::size_t pieces = k - 1;

    if (not n.routes()) {
        /* Delegate the data set into `pieces` new leaves below; the node
         * turns into a range-routing node over the chunk boundaries. */
        std::vector<Entry> data = n.dt.canonical();
        if (data.size() < 2 or data.size() < pieces) return std::nullopt;
        auto pick = fit_choice(choice.value_or(PhysicalChoice{}), /*allow_hash=*/false,
                               dists, rng);
        if (not pick) return std::nullopt;
        RouteView v;
        DataLayout leaf_layout = n.dt.layout;
        SearchMethod leaf_search = n.dt.search;
        for (std::size_t r = 0; r < pieces; ++r) {
            std::size_t lo = r * data.size() / pieces;
            std::size_t hi = (r + 1) * data.size() / pieces;
            PhysicalNode leaf;
            leaf.dt = DtPart::build(leaf_layout, leaf_search,
                                    std::span<const Entry>(data.data() + lo, hi - lo));
            v.doms.push_back(r == 0 ? 0 : data[lo].key);
            v.targets.push_back({out.add(std::move(leaf))});
        }
        PhysicalNode &nm = out.node_mut(node);
        nm.dt = empty_inner_dt();
        write_routing(nm, std::move(v), pick->layout, pick->search, /*range=*/true);
    } else {
        RouteView cv = route_view(n);
        if (cv.size() < 2 or cv.size() < pieces) return std::nullopt;
        bool range = is_range_node(n);
        PartitioningFunction node_part = *n.part; // adding nodes invalidates n
        DataLayout ri_layout = n.ri->layout;
        SearchMethod ri_search = n.ri->search;
        auto pick = fit_choice(choice.value_or(PhysicalChoice{ri_layout, ri_search}),
                               /*allow_hash=*/false, dists, rng);
        if (not pick) return std::nullopt;

        auto push_run = [&](std::size_t lo, std::size_t hi) {
            RouteView run;
            run.doms.assign(cv.doms.begin() + lo, cv.doms.begin() + hi);
            run.targets.assign(cv.targets.begin() + lo, cv.targets.begin() + hi);
            if (range) run.doms.front() = 0;
            PhysicalNode piece;
            piece.part = range
                ? PartitioningFunction(RangePivots{{run.doms.begin() + 1, run.doms.end()}})
                : node_part;
            piece.ri = RiPart::build(pick->layout, pick->search,
                                     std::move(run.doms), std::move(run.targets));
            piece.dt = empty_inner_dt();
            node_id id = out.add(std::move(piece));
            for (std::size_t i = lo; i < hi; ++i) cv.targets[i] = {id};
        };

        if (k == 2) {
            /* Median split: one half of the entries moves one level down,
             * the side is drawn. */
            std::size_t mid = cv.size() / 2;
            if (rng() & 1u) push_run(mid, cv.size());
            else push_run(0, mid);
        } else {
            for (std::size_t r = 0; r < pieces; ++r)
                push_run(r * cv.size() / pieces, (r + 1) * cv.size() / pieces);
        }
        PhysicalNode &nm = out.node_mut(node);
        write_routing(nm, std::move(cv), ri_layout, ri_search, range);
    }
    out.compact();
    if (not tree_shaped(out)) return std::nullopt;
    return out;
}

/*----------------------------------------------------------------------------
 * Distribution draws and the dispatch the search loop uses
 *--------------------------------------------------------------------------*/

MutationKind draw_mutation(const MutationDistributions &dists, std::mt19937_64 &rng) {
    std::size_t pick = pick_weighted(rng, dists.kind_weights);
    if (pick == static_cast<std::size_t>(-1))
        throw ContractViolation("mutation distribution has no positive weight");
    return all_mutation_kinds[pick];
}

namespace {

bool mergeable_into_parent(const PhysicalIndex &index, node_id parent, node_id child,
                           std::size_t child_count) {
    const PhysicalNode &c = index.node(child);
    if (not c.routes())
        return child_count == 1;
    return c.dt.empty() and parts_compatible(index.node(parent), c);
}

bool node_applicable(const PhysicalIndex &index, node_id id, MutationKind kind,
                     const MutationDistributions &dists) {
    const PhysicalNode &n = index.node(id);
    switch (kind) {
        case MutationKind::ChangeLayout: {
            bool routing = live_part(n) == NodePart::Routing;
            DataLayout cur = routing ? n.ri->layout : n.dt.layout;
            for (DataLayout l : all_layouts) {
                if (l == cur or not (dists.layout_weight(l) > 0.0)) continue;
                if ((routing or n.routes()) and l == DataLayout::Hash) continue;
                return true;
            }
            return false;
        }
        case MutationKind::ChangeSearch: {
            bool routing = live_part(n) == NodePart::Routing;
            DataLayout layout = routing ? n.ri->layout : n.dt.layout;
            SearchMethod cur = routing ? n.ri->search : n.dt.search;
            for (SearchMethod s : compatible_methods(layout))
                if (s != cur and dists.search_weight(s) > 0.0) return true;
            return false;
        }
        case MutationKind::MergeHorizontal:
            return children_of(index, id).size() >= 2;
        case MutationKind::SplitHorizontal: {
            for (node_id c : children_of(index, id)) {
                const PhysicalNode &ch = index.node(c);
                std::size_t sz = ch.routes() ? ch.ri->size() : ch.dt.size();
                if (sz >= 2) return true;
            }
            return false;
        }
        case MutationKind::MergeVertical: {
            std::vector<node_id> kids = children_of(index, id);
            for (node_id c : kids)
                if (mergeable_into_parent(index, id, c, kids.size())) return true;
            return false;
        }
        case MutationKind::SplitVertical: {
            std::size_t sz = n.routes() ? n.ri->size() : n.dt.size();
            return sz >= 2;
        }
    }
    return false;
}

} // namespace

std::optional<node_id> draw_node(const PhysicalIndex &index, MutationKind kind,
                                 const MutationDistributions &dists, std::mt19937_64 &rng) {
    std::vector<node_id> applicable;
    for (node_id id = 0; id < index.node_count(); ++id)
        if (node_applicable(index, id, kind, dists)) applicable.push_back(id);
    if (applicable.empty()) return std::nullopt;
    return applicable[pick_index(rng, applicable.size())];
}

std::optional<PhysicalChoice> draw_phys(const MutationDistributions &dists, MutationKind kind,
                                        const PhysicalIndex &index, node_id node,
                                        std::mt19937_64 &rng) {
    const PhysicalNode &n = index.node(node);
    switch (kind) {
        case MutationKind::ChangeLayout: {
            bool routing = live_part(n) == NodePart::Routing;
            DataLayout cur = routing ? n.ri->layout : n.dt.layout;
            std::vector<PhysicalChoice> support;
            std::vector<double> weights;
            for (DataLayout l : all_layouts) {
                if (l == cur) continue;
                if ((routing or n.routes()) and l == DataLayout::Hash) continue;
                double wl = dists.layout_weight(l);
                if (not (wl > 0.0)) continue;
                for (SearchMethod s : compatible_methods(l)) {
                    double ws = dists.search_weight(s);
                    if (not (ws > 0.0)) continue;
                    support.push_back({l, s});
                    weights.push_back(wl * ws);
                }
            }
            std::size_t pick = pick_weighted(rng, weights);
            if (pick == static_cast<std::size_t>(-1)) return std::nullopt;
            return support[pick];
        }
        case MutationKind::ChangeSearch: {
            bool routing = live_part(n) == NodePart::Routing;
            DataLayout layout = routing ? n.ri->layout : n.dt.layout;
            SearchMethod cur = routing ? n.ri->search : n.dt.search;
            auto s = draw_search_for(dists, rng, layout, cur);
            if (not s) return std::nullopt;
            return PhysicalChoice{layout, *s};
        }
        case MutationKind::SplitHorizontal:
            return draw_valid_pair(dists, rng, /*allow_hash=*/true);
        case MutationKind::SplitVertical:
            return draw_valid_pair(dists, rng, /*allow_hash=*/false);
        case MutationKind::MergeHorizontal:
        case MutationKind::MergeVertical:
            /* Merges reuse the target's existing choices; the draw is part of
             * the loop protocol but carries no information. */
            return draw_valid_pair(dists, rng, /*allow_hash=*/true);
    }
    return std::nullopt;
}

std::optional<PhysicalIndex> apply_mutation(const PhysicalIndex &index, MutationKind kind,
                                            node_id node, PhysicalChoice choice,
                                            std::mt19937_64 &rng,
                                            const MutationDistributions &dists) {
    switch (kind) {
        case MutationKind::ChangeLayout:
            return m1_change_layout(index, node, live_part(index.node(node)), choice.layout,
                                    rng, dists);
        case MutationKind::ChangeSearch:
            return m2_change_search(index, node, live_part(index.node(node)), choice.search);
        case MutationKind::MergeHorizontal: {
            std::vector<node_id> kids = children_of(index, node);
            if (kids.size() < 2) return std::nullopt;
            /* Merge directly neighboring siblings, like a B-tree merge does:
             * adjacent ranges coalesce in the parent afterwards. */
            std::size_t at = pick_index(rng, kids.size());
            node_id target = kids[at];
            std::vector<node_id> candidates;
            auto consider = [&](std::size_t i) {
                node_id c = kids[i];
                if (index.node(c).routes() != index.node(target).routes()) return;
                if (parts_compatible(index.node(c), index.node(target))) candidates.push_back(c);
            };
            if (at > 0) consider(at - 1);
            if (at + 1 < kids.size()) consider(at + 1);
            if (candidates.empty()) return std::nullopt;
            node_id source = candidates[pick_index(rng, candidates.size())];
            return m3_merge_horizontal(index, node, target, std::span<const node_id>(&source, 1));
        }
        case MutationKind::SplitHorizontal: {
            std::vector<node_id> kids = children_of(index, node);
            if (kids.empty()) return std::nullopt;
            node_id child = kids[pick_index(rng, kids.size())];
            return m4_split_horizontal(index, node, child, 2, rng, dists, choice);
        }
        case MutationKind::MergeVertical: {
            std::vector<node_id> kids = children_of(index, node);
            std::vector<node_id> candidates;
            for (node_id c : kids)
                if (mergeable_into_parent(index, node, c, kids.size())) candidates.push_back(c);
            if (candidates.empty()) return std::nullopt;
            return m5_merge_vertical(index, node, candidates[pick_index(rng, candidates.size())]);
        }
        case MutationKind::SplitVertical:
            return m6_split_vertical(index, node, 2, rng, dists, choice);
    }
    return std::nullopt;
}

} // namespace genidx
