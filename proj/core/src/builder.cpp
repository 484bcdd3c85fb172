#include "genidx/builder.hpp"

#include <algorithm>
#include <iostream>

#include "genidx/rng.hpp"

namespace genidx {

namespace {

constexpr std::array<DataLayout, 3> leaf_layout_pool{
    DataLayout::SortedCol, DataLayout::Hash, DataLayout::Tree};
constexpr std::array<DataLayout, 2> inner_layout_pool{
    DataLayout::SortedCol, DataLayout::Tree};

/* Canonical empty DT part of inner nodes; inner data sets stay empty, so the
 * choice carries no behavior and is pinned to keep structural hashes clean. */
DtPart empty_inner_dt() {
    return DtPart::build(DataLayout::SortedCol, SearchMethod::Scan, {});
}

template<std::size_t N>
DataLayout draw_layout(std::mt19937_64 &rng, const std::array<DataLayout, N> &pool) {
    return pool[pick_index(rng, pool.size())];
}

/* The exercised search pool: scan, binS, intS, expS and hashS. linregS stays
 * a framework feature reachable through configured distributions. */
SearchMethod draw_search(std::mt19937_64 &rng, DataLayout layout) {
    std::array<SearchMethod, 5> pool;
    std::size_t n = 0;
    for (SearchMethod s : compatible_methods(layout))
        if (s != SearchMethod::LinRegS) pool[n++] = s;
    return pool[pick_index(rng, n)];
}

} // namespace

PhysicalIndex build_single_node(const Dataset &dataset, DataLayout layout, SearchMethod search,
                                std::size_t capacity) {
    if (dataset.size() > capacity)
        throw BuildError("dataset of " + std::to_string(dataset.size()) +
                         " entries exceeds the node capacity of " + std::to_string(capacity));
    PhysicalIndex idx(capacity);
    PhysicalNode node;
    node.dt = DtPart::build(layout, search, dataset.entries());
    node_id root = idx.add(std::move(node));
    idx.set_start({root});
    return idx;
}

PhysicalIndex bulkload_btree_random(const Dataset &dataset, const BulkloadSpec &spec,
                                    std::mt19937_64 &rng, std::size_t capacity) {
    if (spec.fanout < 2) throw BuildError("bulkload fanout must be at least 2");
    if (spec.leaf_fill < 1) throw BuildError("bulkload leaf fill must be at least 1");
    if (spec.leaf_count * spec.leaf_fill < dataset.size())
        throw BuildError("bulkload spec covers " +
                         std::to_string(spec.leaf_count * spec.leaf_fill) +
                         " entries but the dataset has " + std::to_string(dataset.size()));
    if (spec.leaf_fill > capacity)
        throw BuildError("leaf fill exceeds the node capacity");

    PhysicalIndex idx(capacity);
    std::vector<Entry> entries = dataset.entries();

    /* Leaf level: consecutive equally filled chunks. */
    struct Slot { node_id id; key_type first_key; };
    std::vector<Slot> level;
    std::size_t n = entries.size();
    std::size_t leaves = n == 0 ? 1 : (n + spec.leaf_fill - 1) / spec.leaf_fill;
    for (std::size_t i = 0; i < leaves; ++i) {
        std::size_t lo = i * spec.leaf_fill;
        std::size_t hi = std::min(n, lo + spec.leaf_fill);
        std::span<const Entry> slice(entries.data() + lo, hi - lo);
        DataLayout layout = spec.fixed ? spec.fixed->layout : draw_layout(rng, leaf_layout_pool);
        SearchMethod search = spec.fixed ? spec.fixed->search : draw_search(rng, layout);
        PhysicalNode leaf;
        leaf.dt = DtPart::build(layout, search, slice);
        level.push_back({idx.add(std::move(leaf)), slice.empty() ? 0 : slice.front().key});
    }

    /* Inner levels: group fanout children, pivot = first key of each right
     * sibling. */
    while (level.size() > 1) {
        std::vector<Slot> parents;
        for (std::size_t i = 0; i < level.size(); i += spec.fanout) {
            std::size_t end = std::min(level.size(), i + spec.fanout);
            std::vector<key_type> doms;
            std::vector<target_set> targets;
            doms.push_back(0);
            targets.push_back({level[i].id});
            for (std::size_t c = i + 1; c < end; ++c) {
                doms.push_back(level[c].first_key);
                targets.push_back({level[c].id});
            }
            RangePivots rp;
            rp.pivots.assign(doms.begin() + 1, doms.end());
            DataLayout layout = spec.fixed ? spec.fixed->layout : draw_layout(rng, inner_layout_pool);
            SearchMethod search = spec.fixed ? spec.fixed->search : draw_search(rng, layout);
            PhysicalNode inner;
            inner.part = PartitioningFunction(std::move(rp));
            inner.ri = RiPart::build(layout, search, std::move(doms), std::move(targets));
            inner.dt = empty_inner_dt();
            parents.push_back({idx.add(std::move(inner)), level[i].first_key});
        }
        level = std::move(parents);
    }

    idx.set_start({level.front().id});
    idx.compact();
    return idx;
}

/*----------------------------------------------------------------------------
 * build_from_config
 *--------------------------------------------------------------------------*/

namespace {

struct ConfigBuilder {
    PhysicalIndex &idx;
    std::size_t capacity;

    node_id materialize(const NodeConfig &cfg, std::vector<Entry> slice) {
        if (not cfg.ri or cfg.children.empty()) {
            if (slice.size() > capacity)
                throw BuildError("leaf would hold " + std::to_string(slice.size()) +
                                 " entries, over the capacity of " + std::to_string(capacity));
            PhysicalNode leaf;
            leaf.part = cfg.part;
            if (cfg.ri) { // routing shape without children: keep the doms, no targets
                std::vector<key_type> doms;
                for (const auto &[dom, kids] : cfg.ri->entries) doms.push_back(dom);
                std::vector<target_set> targets(doms.size());
                leaf.ri = RiPart::build(cfg.ri->layout, cfg.ri->search,
                                        std::move(doms), std::move(targets));
            }
            leaf.dt = DtPart::build(cfg.dt_layout, cfg.dt_search, slice);
            return idx.add(std::move(leaf));
        }

        if (not cfg.part)
            throw ConfigError("routing node without a partitioning function");

        /* Distribute the slice to the children. Each child collects the keys
         * of every entry that lists it first; correctness only needs one
         * reachable placement per key. */
        std::vector<std::vector<Entry>> child_slices(cfg.children.size());
        const auto &entries = cfg.ri->entries;
        if (cfg.part->is_range_pivots()) {
            for (std::size_t e = 0; e < entries.size(); ++e) {
                key_type lo = entries[e].first;
                auto begin = std::lower_bound(slice.begin(), slice.end(), lo,
                                              [](const Entry &x, key_type k) { return x.key < k; });
                auto end = e + 1 < entries.size()
                    ? std::lower_bound(slice.begin(), slice.end(), entries[e + 1].first,
                                       [](const Entry &x, key_type k) { return x.key < k; })
                    : slice.end();
                if (begin == end) continue;
                if (entries[e].second.empty())
                    throw BuildError("config routes keys to an entry with no children");
                auto &dst = child_slices[entries[e].second.front()];
                dst.insert(dst.end(), begin, end);
            }
        } else {
            std::map<std::uint64_t, std::size_t> entry_of;
            for (std::size_t e = 0; e < entries.size(); ++e)
                entry_of.emplace(entries[e].first, e);
            for (const Entry &x : slice) {
                auto it = entry_of.find(cfg.part->apply(x.key));
                if (it == entry_of.end() or entries[it->second].second.empty())
                    throw BuildError("config routing does not cover key " + std::to_string(x.key));
                child_slices[entries[it->second].second.front()].push_back(x);
            }
        }

        std::vector<node_id> child_ids;
        child_ids.reserve(cfg.children.size());
        for (std::size_t c = 0; c < cfg.children.size(); ++c)
            child_ids.push_back(materialize(cfg.children[c], std::move(child_slices[c])));

        if (entries.size() > capacity)
            throw BuildError("routing entry count exceeds the node capacity");
        std::vector<key_type> doms;
        std::vector<target_set> targets;
        doms.reserve(entries.size());
        targets.reserve(entries.size());
        for (const auto &[dom, kids] : entries) {
            doms.push_back(dom);
            target_set ts;
            for (std::size_t k : kids) ts.push_back(child_ids[k]);
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            targets.push_back(std::move(ts));
        }
        PhysicalNode inner;
        inner.part = cfg.part;
        inner.ri = RiPart::build(cfg.ri->layout, cfg.ri->search, std::move(doms), std::move(targets));
        inner.dt = DtPart::build(cfg.dt_layout, cfg.dt_search, {});
        return idx.add(std::move(inner));
    }
};

} // namespace

PhysicalIndex build_from_config(const IndexConfig &config, const Dataset &dataset) {
    if (config.roots.empty()) throw ConfigError("index config has no root node");
    if (config.roots.size() > 1)
        throw ConfigError("multi-root configs cannot be rebuilt against one dataset");
    if (config.meta.dataset_fingerprint != 0 and
        config.meta.dataset_fingerprint != dataset.fingerprint())
        std::cerr << "genidx: warning: config was found on a different dataset ("
                  << config.meta.dataset_name << "), rebuilding anyway\n";

    /* Scale node capacity when the dataset outgrew the config's origin. */
    std::size_t capacity = config.capacity_limit;
    if (config.meta.origin_size > 0 and dataset.size() > config.meta.origin_size) {
        std::size_t scale = (dataset.size() + config.meta.origin_size - 1) / config.meta.origin_size;
        capacity = config.capacity_limit * scale;
    }

    PhysicalIndex idx(capacity);
    ConfigBuilder builder{idx, capacity};
    node_id root = builder.materialize(config.roots.front(), dataset.entries());
    idx.set_start({root});
    idx.compact();
    return idx;
}

std::vector<PhysicalIndex> init_population(const Dataset &dataset, std::size_t s_init,
                                           std::uint64_t master_seed, const BulkloadSpec &spec,
                                           std::size_t capacity) {
    std::vector<PhysicalIndex> population;
    population.reserve(s_init);
    for (std::size_t i = 0; i < s_init; ++i) {
        std::mt19937_64 rng(derive_seed(master_seed, 0x1217 + i));
        population.push_back(bulkload_btree_random(dataset, spec, rng, capacity));
    }
    return population;
}

PhysicalIndex build_three_partition_handspec(const Dataset &dataset, std::size_t capacity) {
    std::size_t n = dataset.size();
    if (n < 10) throw BuildError("three-partition structure needs at least 10 keys");
    std::size_t cut1 = n / 10;
    std::size_t cut2 = n * 85 / 100;
    std::vector<Entry> entries = dataset.entries();

    /* Hash partitions may exceed the default capacity on large datasets; the
     * structure is what is being evaluated, so the capacity follows it. */
    std::size_t needed = std::max(cut1, std::max(n - cut2, std::size_t{1}));
    PhysicalIndex idx(std::max(capacity, needed));

    PhysicalNode low;
    low.dt = DtPart::build(DataLayout::Hash, SearchMethod::HashS,
                           std::span<const Entry>(entries.data(), cut1));
    node_id low_id = idx.add(std::move(low));

    /* Middle partition: B-tree-style subtree, sorted_col and binS. */
    Dataset middle;
    middle.name = dataset.name + "_mid";
    middle.keys.assign(dataset.keys.begin() + static_cast<std::ptrdiff_t>(cut1),
                       dataset.keys.begin() + static_cast<std::ptrdiff_t>(cut2));
    BulkloadSpec mid_spec = BulkloadSpec::sized_for(middle.size());
    mid_spec.fixed = BulkloadSpec::Fixed{};
    std::mt19937_64 rng(1); // unused under fixed choices
    PhysicalIndex mid_idx = bulkload_btree_random(middle, mid_spec, rng, idx.capacity_limit());

    /* Graft the subtree; offsets shift by cut1 so payloads stay global. */
    std::vector<node_id> remap(mid_idx.node_count());
    for (node_id i = 0; i < mid_idx.node_count(); ++i) {
        PhysicalNode copy = mid_idx.node(i);
        if (not copy.dt.empty()) {
            std::vector<Entry> shifted = copy.dt.canonical();
            for (Entry &e : shifted) e.payload += cut1;
            copy.dt = DtPart::build(copy.dt.layout, copy.dt.search, shifted);
        }
        remap[i] = idx.add(std::move(copy));
    }
    for (node_id i = 0; i < mid_idx.node_count(); ++i) {
        PhysicalNode &grafted = idx.node_mut(remap[i]);
        if (not grafted.ri) continue;
        auto pairs = grafted.ri->canonical();
        std::vector<key_type> doms;
        std::vector<target_set> targets;
        for (auto &[dom, ts] : pairs) {
            doms.push_back(dom);
            target_set mapped;
            for (node_id t : ts) mapped.push_back(remap[t]);
            targets.push_back(std::move(mapped));
        }
        grafted.ri = RiPart::build(grafted.ri->layout, grafted.ri->search,
                                   std::move(doms), std::move(targets));
    }
    node_id mid_root = remap[mid_idx.start_nodes().front()];

    PhysicalNode high;
    high.dt = DtPart::build(DataLayout::Hash, SearchMethod::HashS,
                            std::span<const Entry>(entries.data() + cut2, n - cut2));
    node_id high_id = idx.add(std::move(high));

    PhysicalNode root;
    RangePivots rp;
    rp.pivots = {dataset.keys[cut1], dataset.keys[cut2]};
    root.part = PartitioningFunction(rp);
    root.ri = RiPart::build(DataLayout::SortedCol, SearchMethod::BinS,
                            {0, rp.pivots[0], rp.pivots[1]},
                            {{low_id}, {mid_root}, {high_id}});
    root.dt = DtPart::build(DataLayout::SortedCol, SearchMethod::Scan, {});
    node_id root_id = idx.add(std::move(root));

    idx.set_start({root_id});
    idx.compact();
    return idx;
}

} // namespace genidx
