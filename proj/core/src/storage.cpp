#include "genidx/storage.hpp"

#include <algorithm>

namespace genidx {

/*----------------------------------------------------------------------------
 * DtPart
 *--------------------------------------------------------------------------*/

DtPart DtPart::build(DataLayout layout, SearchMethod search, std::span<const Entry> sorted) {
    if (not compatible(layout, search))
        throw ContractViolation("invalid layout/search combination: " +
                                std::string(to_string(layout)) + "/" +
                                std::string(to_string(search)));
    DtPart part;
    part.layout = layout;
    part.search = search;
    switch (layout) {
        case DataLayout::SortedCol:
            part.keys.reserve(sorted.size());
            part.vals.reserve(sorted.size());
            for (const Entry &e : sorted) {
                part.keys.push_back(e.key);
                part.vals.push_back(e.payload);
            }
            break;
        case DataLayout::SortedRow:
            part.rows.assign(sorted.begin(), sorted.end());
            break;
        case DataLayout::Hash:
            part.hash.rebuild(sorted);
            break;
        case DataLayout::Tree:
            for (const Entry &e : sorted) part.tree.emplace_hint(part.tree.end(), e.key, e.payload);
            break;
    }
    if (search == SearchMethod::LinRegS) {
        if (layout == DataLayout::SortedCol)
            part.model = fit_linreg(part.keys);
        else
            part.model = fit_linreg(part.rows.size(), [&](std::size_t i) { return part.rows[i].key; });
    }
    return part;
}

std::size_t DtPart::size() const {
    switch (layout) {
        case DataLayout::SortedCol: return keys.size();
        case DataLayout::SortedRow: return rows.size();
        case DataLayout::Hash: return hash.size();
        case DataLayout::Tree: return tree.size();
    }
    return 0;
}

std::optional<payload_type> DtPart::point(key_type key) const {
    switch (layout) {
        case DataLayout::SortedCol: {
            std::size_t pos = lower_bound_pos(keys.size(), key, search, &model,
                                              [&](std::size_t i) { return keys[i]; });
            if (pos < keys.size() and keys[pos] == key) return vals[pos];
            return std::nullopt;
        }
        case DataLayout::SortedRow: {
            std::size_t pos = lower_bound_pos(rows.size(), key, search, &model,
                                              [&](std::size_t i) { return rows[i].key; });
            if (pos < rows.size() and rows[pos].key == key) return rows[pos].payload;
            return std::nullopt;
        }
        case DataLayout::Hash:
            return hash.probe(key);
        case DataLayout::Tree: {
            auto it = tree.find(key);
            if (it != tree.end()) return it->second;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

void DtPart::range_into(key_type l, key_type h, std::vector<Entry> &out, ExecStats *stats) const {
    switch (layout) {
        case DataLayout::SortedCol: {
            std::size_t pos = lower_bound_pos(keys.size(), l, search, &model,
                                              [&](std::size_t i) { return keys[i]; });
            for (; pos < keys.size() and keys[pos] <= h; ++pos)
                out.push_back({keys[pos], vals[pos]});
            return;
        }
        case DataLayout::SortedRow: {
            std::size_t pos = lower_bound_pos(rows.size(), l, search, &model,
                                              [&](std::size_t i) { return rows[i].key; });
            for (; pos < rows.size() and rows[pos].key <= h; ++pos)
                out.push_back(rows[pos]);
            return;
        }
        case DataLayout::Hash:
            /* No order to exploit; probe every stored pair. */
            if (stats and not hash.empty()) ++stats->hash_range_scans;
            hash.for_each([&](key_type k, payload_type v) {
                if (k >= l and k <= h) out.push_back({k, v});
            });
            return;
        case DataLayout::Tree:
            for (auto it = tree.lower_bound(l); it != tree.end() and it->first <= h; ++it)
                out.push_back({it->first, it->second});
            return;
    }
}

std::optional<Entry> DtPart::lower_bound_entry(key_type l, key_type h, ExecStats *stats) const {
    switch (layout) {
        case DataLayout::SortedCol: {
            std::size_t pos = lower_bound_pos(keys.size(), l, search, &model,
                                              [&](std::size_t i) { return keys[i]; });
            if (pos < keys.size() and keys[pos] <= h) return Entry{keys[pos], vals[pos]};
            return std::nullopt;
        }
        case DataLayout::SortedRow: {
            std::size_t pos = lower_bound_pos(rows.size(), l, search, &model,
                                              [&](std::size_t i) { return rows[i].key; });
            if (pos < rows.size() and rows[pos].key <= h) return rows[pos];
            return std::nullopt;
        }
        case DataLayout::Hash: {
            if (stats and not hash.empty()) ++stats->hash_range_scans;
            std::optional<Entry> best;
            hash.for_each([&](key_type k, payload_type v) {
                if (k >= l and k <= h and (not best or k < best->key)) best = Entry{k, v};
            });
            return best;
        }
        case DataLayout::Tree: {
            auto it = tree.lower_bound(l);
            if (it != tree.end() and it->first <= h) return Entry{it->first, it->second};
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::vector<Entry> DtPart::canonical() const {
    std::vector<Entry> out;
    out.reserve(size());
    switch (layout) {
        case DataLayout::SortedCol:
            for (std::size_t i = 0; i < keys.size(); ++i) out.push_back({keys[i], vals[i]});
            break;
        case DataLayout::SortedRow:
            out = rows;
            break;
        case DataLayout::Hash:
            hash.for_each([&](key_type k, payload_type v) { out.push_back({k, v}); });
            std::sort(out.begin(), out.end());
            break;
        case DataLayout::Tree:
            for (const auto &[k, v] : tree) out.push_back({k, v});
            break;
    }
    return out;
}

/*----------------------------------------------------------------------------
 * RiPart
 *--------------------------------------------------------------------------*/

RiPart RiPart::build(DataLayout layout, SearchMethod search,
                     std::vector<key_type> doms, std::vector<target_set> targets) {
    if (layout == DataLayout::Hash)
        throw ContractViolation("hash layout does not support child partitions");
    if (not compatible(layout, search))
        throw ContractViolation("invalid layout/search combination for routing: " +
                                std::string(to_string(layout)) + "/" +
                                std::string(to_string(search)));
    if (doms.size() != targets.size())
        throw ContractViolation("routing doms and targets must align");
    RiPart part;
    part.layout = layout;
    part.search = search;
    switch (layout) {
        case DataLayout::SortedCol:
            part.doms = std::move(doms);
            part.targets = std::move(targets);
            break;
        case DataLayout::SortedRow:
            part.rows.reserve(doms.size());
            for (std::size_t i = 0; i < doms.size(); ++i)
                part.rows.emplace_back(doms[i], std::move(targets[i]));
            break;
        case DataLayout::Tree:
            for (std::size_t i = 0; i < doms.size(); ++i)
                part.tree.emplace_hint(part.tree.end(), doms[i], std::move(targets[i]));
            break;
        case DataLayout::Hash:
            break; // unreachable
    }
    if (search == SearchMethod::LinRegS) {
        if (layout == DataLayout::SortedCol)
            part.model = fit_linreg(part.doms);
        else
            part.model = fit_linreg(part.rows.size(), [&](std::size_t i) { return part.rows[i].first; });
    }
    return part;
}

std::size_t RiPart::size() const {
    switch (layout) {
        case DataLayout::SortedCol: return doms.size();
        case DataLayout::SortedRow: return rows.size();
        case DataLayout::Tree: return tree.size();
        case DataLayout::Hash: return 0;
    }
    return 0;
}

key_type RiPart::dom_at(std::size_t i) const {
    switch (layout) {
        case DataLayout::SortedCol: return doms[i];
        case DataLayout::SortedRow: return rows[i].first;
        case DataLayout::Tree: {
            auto it = tree.begin();
            std::advance(it, static_cast<std::ptrdiff_t>(i));
            return it->first;
        }
        case DataLayout::Hash: break;
    }
    throw ContractViolation("dom_at on empty routing part");
}

const target_set &RiPart::targets_at(std::size_t i) const {
    switch (layout) {
        case DataLayout::SortedCol: return targets[i];
        case DataLayout::SortedRow: return rows[i].second;
        case DataLayout::Tree: {
            auto it = tree.begin();
            std::advance(it, static_cast<std::ptrdiff_t>(i));
            return it->second;
        }
        case DataLayout::Hash: break;
    }
    throw ContractViolation("targets_at on empty routing part");
}

std::size_t RiPart::lower_bound(key_type probe) const {
    switch (layout) {
        case DataLayout::SortedCol:
            return lower_bound_pos(doms.size(), probe, search, &model,
                                   [&](std::size_t i) { return doms[i]; });
        case DataLayout::SortedRow:
            return lower_bound_pos(rows.size(), probe, search, &model,
                                   [&](std::size_t i) { return rows[i].first; });
        case DataLayout::Tree: {
            auto it = tree.lower_bound(probe);
            return static_cast<std::size_t>(std::distance(tree.begin(), it));
        }
        case DataLayout::Hash: break;
    }
    return 0;
}

std::size_t RiPart::predecessor(key_type probe) const {
    std::size_t n = size();
    std::size_t lb = lower_bound(probe);
    if (lb < n and dom_at(lb) == probe) return lb;
    return lb == 0 ? n : lb - 1;
}

std::vector<std::pair<key_type, target_set>> RiPart::canonical() const {
    std::vector<std::pair<key_type, target_set>> out;
    out.reserve(size());
    switch (layout) {
        case DataLayout::SortedCol:
            for (std::size_t i = 0; i < doms.size(); ++i) out.emplace_back(doms[i], targets[i]);
            break;
        case DataLayout::SortedRow:
            out = rows;
            break;
        case DataLayout::Tree:
            for (const auto &[d, t] : tree) out.emplace_back(d, t);
            break;
        case DataLayout::Hash:
            break;
    }
    return out;
}

} // namespace genidx
