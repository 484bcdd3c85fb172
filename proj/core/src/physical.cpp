#include "genidx/physical.hpp"

#include <algorithm>
#include <cmath>

namespace genidx {

namespace {

/* Per-node cost formulas of the deterministic fitness model. Node visits are
 * counted exactly by the walk; the intra-node search cost is the expected
 * comparison count of the method on a container of that size. */

double log2_size(std::size_t n) { return n < 2 ? 1.0 : std::log2(static_cast<double>(n)); }

double search_cost(SearchMethod m, DataLayout l, std::size_t n, const LinRegModel &model,
                   const CostWeights &w) {
    if (n == 0) return 0.0;
    double lg = log2_size(n);
    switch (m) {
        case SearchMethod::Scan:
            return w.comparison * (static_cast<double>(n) / 2.0 + 1.0);
        case SearchMethod::BinS: {
            double c = w.comparison * (lg + 1.0);
            if (l == DataLayout::Tree) c *= 2.0; // pointer-chasing descent
            return c;
        }
        case SearchMethod::IntS:
            return w.comparison * (std::log2(lg + 1.0) + 2.0);
        case SearchMethod::ExpS:
            return w.comparison * (2.0 * lg + 2.0);
        case SearchMethod::HashS:
            return w.hash_probe * 1.5; // probe plus expected chain step
        case SearchMethod::LinRegS:
            return w.comparison *
                   (2.0 + static_cast<double>(model.under + model.over) / 2.0);
    }
    return w.comparison;
}

double node_cost(const PhysicalNode &n, bool range_op, const CostWeights &w) {
    double c = w.node_visit;
    if (not n.dt.empty()) {
        if (range_op and n.dt.layout == DataLayout::Hash)
            c += w.hash_probe * static_cast<double>(n.dt.size()); // degenerate full scan
        else
            c += search_cost(n.dt.search, n.dt.layout, n.dt.size(), n.dt.model, w);
    }
    if (n.ri and n.ri->size() > 0)
        c += search_cost(n.ri->search, n.ri->layout, n.ri->size(), n.ri->model, w);
    return c;
}

} // namespace

std::vector<node_id> preorder(const PhysicalIndex &index) {
    std::vector<node_id> order;
    std::vector<bool> seen(index.node_count(), false);
    std::vector<node_id> stack;
    /* Explicit stack with reversed pushes to get left-to-right preorder. */
    for (auto it = index.start_nodes().rbegin(); it != index.start_nodes().rend(); ++it)
        stack.push_back(*it);
    std::vector<node_id> children;
    while (not stack.empty()) {
        node_id id = stack.back();
        stack.pop_back();
        if (seen[id]) continue;
        seen[id] = true;
        order.push_back(id);
        const PhysicalNode &n = index.node(id);
        if (not n.ri) continue;
        children.clear();
        n.ri->visit_all([&](node_id t) { children.push_back(t); });
        for (auto it = children.rbegin(); it != children.rend(); ++it)
            if (not seen[*it]) stack.push_back(*it);
    }
    return order;
}

void PhysicalIndex::compact() {
    std::vector<node_id> order = preorder(*this);
    std::vector<node_id> remap(nodes_.size(), ~node_id(0));
    for (std::size_t i = 0; i < order.size(); ++i)
        remap[order[i]] = static_cast<node_id>(i);

    std::vector<PhysicalNode> packed;
    packed.reserve(order.size());
    for (node_id old : order)
        packed.push_back(std::move(nodes_[old]));

    auto remap_targets = [&](target_set &ts) {
        for (node_id &t : ts) t = remap[t];
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    };
    for (PhysicalNode &n : packed) {
        if (not n.ri) continue;
        switch (n.ri->layout) {
            case DataLayout::SortedCol:
                for (target_set &ts : n.ri->targets) remap_targets(ts);
                break;
            case DataLayout::SortedRow:
                for (auto &row : n.ri->rows) remap_targets(row.second);
                break;
            case DataLayout::Tree:
                for (auto &kv : n.ri->tree) remap_targets(kv.second);
                break;
            case DataLayout::Hash:
                break;
        }
    }
    for (node_id &sn : start_) sn = remap[sn];

    nodes_ = std::move(packed);
}

void PhysicalIndex::route_point(const PhysicalNode &n, key_type key,
                                std::vector<node_id> &stack) const {
    auto push = [&](node_id t) { stack.push_back(t); };
    if (n.part->is_range_pivots())
        n.ri->visit_pred(key, push);
    else
        n.ri->visit_exact(n.part->apply(key), push);
}

std::optional<payload_type> PhysicalIndex::execute_point(key_type key, ExecScratch &scratch,
                                                         ExecStats *stats) const {
    scratch.begin(nodes_.size());
    scratch.stack.assign(start_.begin(), start_.end());
    while (not scratch.stack.empty()) {
        node_id id = scratch.stack.back();
        scratch.stack.pop_back();
        if (not scratch.mark(id)) continue;
        const PhysicalNode &n = nodes_[id];
        if (stats) {
            ++stats->nodes_visited;
            if (stats->weights) stats->cost += node_cost(n, false, *stats->weights);
        }
        if (not n.dt.empty())
            if (auto hit = n.dt.point(key)) return hit;
        if (n.ri) route_point(n, key, scratch.stack);
    }
    return std::nullopt;
}

void PhysicalIndex::range_rec(node_id id, key_type l, key_type h, ExecScratch &scratch,
                              std::vector<Entry> &out, ExecStats *stats) const {
    if (not scratch.mark(id)) return;
    const PhysicalNode &n = nodes_[id];
    if (stats) {
        ++stats->nodes_visited;
        if (stats->weights) stats->cost += node_cost(n, true, *stats->weights);
    }
    n.dt.range_into(l, h, out, stats);
    if (not n.ri) return;

    auto recurse = [&](node_id t) { range_rec(t, l, h, scratch, out, stats); };
    if (n.part->is_range_pivots()) {
        n.ri->visit_span(l, h, /*pred_lo=*/true, recurse);
    } else if (n.part->monotone() or l == h) {
        std::uint64_t dlo = n.part->apply(l);
        std::uint64_t dhi = l == h ? dlo : n.part->apply(h);
        n.ri->visit_span(dlo, dhi, /*pred_lo=*/false, recurse);
    } else {
        n.ri->visit_all(recurse);
    }
}

void PhysicalIndex::execute_range(key_type l, key_type h, ExecScratch &scratch,
                                  std::vector<Entry> &out, ExecStats *stats) const {
    scratch.begin(nodes_.size());
    for (node_id sn : start_)
        range_rec(sn, l, h, scratch, out, stats);
}

std::optional<Entry> PhysicalIndex::lb_rec(node_id id, key_type l, key_type h,
                                           ExecScratch &scratch, ExecStats *stats) const {
    if (not scratch.mark(id)) return std::nullopt;
    const PhysicalNode &n = nodes_[id];
    if (stats) {
        ++stats->nodes_visited;
        if (stats->weights) stats->cost += node_cost(n, true, *stats->weights);
    }
    std::optional<Entry> best = n.dt.lower_bound_entry(l, h, stats);
    auto consider = [&](const std::optional<Entry> &cand) {
        if (cand and (not best or cand->key < best->key)) best = cand;
    };
    if (not n.ri) return best;

    if (n.part->is_range_pivots()) {
        /* Keys of later ranges are strictly larger, so the first range that
         * yields a hit settles the lower bound. */
        n.ri->walk_from_pred(l, [&](const target_set &ts) {
            std::optional<Entry> found;
            for (node_id t : ts) {
                auto r = lb_rec(t, l, h, scratch, stats);
                if (r and (not found or r->key < found->key)) found = r;
            }
            consider(found);
            return not found.has_value(); // keep walking only while empty
        });
    } else if (n.part->monotone()) {
        std::uint64_t dlo = n.part->apply(l);
        std::uint64_t dhi = n.part->apply(h);
        std::size_t pos = n.ri->lower_bound(dlo);
        for (std::size_t e = n.ri->size(); pos < e and n.ri->dom_at(pos) <= dhi; ++pos) {
            std::optional<Entry> found;
            for (node_id t : n.ri->targets_at(pos)) {
                auto r = lb_rec(t, l, h, scratch, stats);
                if (r and (not found or r->key < found->key)) found = r;
            }
            if (found) { consider(found); break; }
        }
    } else {
        n.ri->visit_all([&](node_id t) { consider(lb_rec(t, l, h, scratch, stats)); });
    }
    return best;
}

std::optional<Entry> PhysicalIndex::execute_lower_bound(key_type l, key_type h,
                                                        ExecScratch &scratch,
                                                        ExecStats *stats) const {
    scratch.begin(nodes_.size());
    std::optional<Entry> best;
    for (node_id sn : start_) {
        auto r = lb_rec(sn, l, h, scratch, stats);
        if (r and (not best or r->key < best->key)) best = r;
    }
    return best;
}

LogicalIndex PhysicalIndex::logical_view() const {
    LogicalIndex out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const PhysicalNode &n = nodes_[i];
        LogicalNode ln;
        ln.id = static_cast<node_id>(i);
        ln.part = n.part;
        if (n.ri) {
            RoutingInformation ri;
            auto pairs = n.ri->canonical();
            ri.entries.reserve(pairs.size());
            if (n.part and n.part->is_range_pivots()) {
                /* Domain values of range partitionings are range ordinals. */
                for (std::size_t e = 0; e < pairs.size(); ++e)
                    ri.entries.push_back({e, pairs[e].second});
            } else {
                for (auto &[dom, ts] : pairs)
                    ri.entries.push_back({dom, ts});
            }
            ln.routing = std::move(ri);
        }
        ln.data = n.dt.canonical();
        out.add(std::move(ln));
    }
    out.set_start_nodes(start_);
    return out;
}

IndexShape PhysicalIndex::shape() const {
    IndexShape s;
    s.nodes = nodes_.size();
    for (const PhysicalNode &n : nodes_) {
        ++s.dt_layouts[static_cast<std::size_t>(n.dt.layout)];
        if (n.ri) ++s.ri_layouts[static_cast<std::size_t>(n.ri->layout)];
        if (not n.routes()) ++s.leaves;
    }
    /* Depth via BFS over levels. */
    std::vector<int> level(nodes_.size(), -1);
    std::vector<node_id> frontier;
    for (node_id sn : start_) { level[sn] = 1; frontier.push_back(sn); }
    std::size_t depth = nodes_.empty() ? 0 : 1;
    while (not frontier.empty()) {
        std::vector<node_id> next;
        for (node_id id : frontier) {
            const PhysicalNode &n = nodes_[id];
            if (not n.ri) continue;
            n.ri->visit_all([&](node_id t) {
                if (level[t] == -1) {
                    level[t] = level[id] + 1;
                    depth = std::max(depth, static_cast<std::size_t>(level[t]));
                    next.push_back(t);
                }
            });
        }
        frontier = std::move(next);
    }
    s.depth = depth;
    return s;
}

std::optional<std::string> PhysicalIndex::validate() const {
    if (nodes_.empty())
        return start_.empty() ? std::optional<std::string>("index has no nodes") : std::nullopt;
    if (start_.empty()) return "index has no start nodes";
    for (node_id sn : start_)
        if (sn >= nodes_.size()) return "start node out of range";

    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const PhysicalNode &n = nodes_[i];
        std::string where = "node " + std::to_string(i) + ": ";
        if (not compatible(n.dt.layout, n.dt.search))
            return where + "incompatible data layout/search";
        if (n.dt.size() > capacity_)
            return where + "data set exceeds the capacity limit";
        if (n.ri and not n.part)
            return where + "routing without a partitioning function";
        if (n.ri) {
            if (n.ri->layout == DataLayout::Hash)
                return where + "hash layout on a routing part";
            if (not compatible(n.ri->layout, n.ri->search))
                return where + "incompatible routing layout/search";
            if (n.ri->size() > capacity_)
                return where + "routing exceeds the capacity limit";
            if (n.routes()) {
                if (not n.dt.empty())
                    return where + "routing node with a populated data set";
                if (n.dt.layout == DataLayout::Hash)
                    return where + "hash layout on a node with child partitions";
            }
            for (std::size_t e = 0, cnt = n.ri->size(); e < cnt; ++e)
                for (node_id t : n.ri->targets_at(e))
                    if (t >= nodes_.size())
                        return where + "routing target out of range";
            if (const RangePivots *rp = n.part->range_pivots()) {
                if (n.ri->size() != rp->pivots.size() + 1)
                    return where + "routing entries out of sync with range pivots";
                if (n.ri->dom_at(0) != 0)
                    return where + "first range boundary must be 0";
                for (std::size_t p = 0; p < rp->pivots.size(); ++p)
                    if (n.ri->dom_at(p + 1) != rp->pivots[p])
                        return where + "range boundary does not match its pivot";
            }
        }
        auto data = n.dt.canonical();
        for (std::size_t k = 1; k < data.size(); ++k)
            if (not (data[k - 1].key < data[k].key))
                return where + "data keys not strictly increasing";
    }

    LogicalIndex lv = logical_view();
    if (not check_complete(lv)) return "routing references a missing node";
    if (not check_reachable_dag(lv)) return "index graph is not a reachable DAG";
    return std::nullopt;
}

} // namespace genidx
