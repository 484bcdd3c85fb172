#include "genidx/logical.hpp"

#include <random>
#include <unordered_set>

namespace genidx {

LogicalNode &LogicalIndex::add(LogicalNode node) {
    auto [it, inserted] = nodes_.insert_or_assign(node.id, std::move(node));
    (void) inserted;
    return it->second;
}

const LogicalNode *LogicalIndex::find(node_id id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

namespace {

/* Appends the children a query with key interval [l, h] must follow.
 * Monotone partitioning functions allow pruning to the domain interval
 * [apply(l), apply(h)]; everything else follows all entries, except that a
 * point query can always route to its exact domain value. */
void qualifying_targets(const LogicalNode &node, key_type l, key_type h,
                        std::vector<node_id> &out) {
    if (not node.part or not node.routing) return;
    const auto &entries = node.routing->entries;
    if (node.part->monotone() or l == h) {
        std::uint64_t dlo = node.part->apply(l);
        std::uint64_t dhi = l == h ? dlo : node.part->apply(h);
        auto it = std::lower_bound(entries.begin(), entries.end(), dlo,
                                   [](const RoutingEntry &e, std::uint64_t d) { return e.dom < d; });
        for (; it != entries.end() and it->dom <= dhi; ++it)
            out.insert(out.end(), it->targets.begin(), it->targets.end());
    } else {
        for (const auto &e : entries)
            out.insert(out.end(), e.targets.begin(), e.targets.end());
    }
}

} // namespace

std::vector<Entry> range_query(const LogicalIndex &index, std::span<const node_id> start,
                               key_type l, key_type h) {
    if (start.empty())
        throw ContractViolation("range query needs a non-empty start node set");
    if (l > h)
        throw ContractViolation("range query needs l <= h");

    std::vector<Entry> result;
    std::unordered_set<node_id> visited;
    std::vector<node_id> stack(start.begin(), start.end());

    while (not stack.empty()) {
        node_id id = stack.back();
        stack.pop_back();
        if (not visited.insert(id).second) continue;

        const LogicalNode *node = index.find(id);
        if (node == nullptr)
            throw ContractViolation("range query routed to unknown node id " + std::to_string(id));

        auto lo = std::lower_bound(node->data.begin(), node->data.end(), l,
                                   [](const Entry &e, key_type k) { return e.key < k; });
        for (; lo != node->data.end() and lo->key <= h; ++lo)
            result.push_back(*lo);

        qualifying_targets(*node, l, h, stack);
    }

    std::sort(result.begin(), result.end(), [](const Entry &a, const Entry &b) {
        return a.key < b.key or (a.key == b.key and a.payload < b.payload);
    });
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

bool check_complete(const LogicalIndex &index) {
    for (const auto &[id, node] : index.nodes()) {
        if (not node.routing) continue;
        for (const auto &entry : node.routing->entries)
            for (node_id t : entry.targets)
                if (index.find(t) == nullptr) return false;
    }
    return true;
}

bool check_reachable_dag(const LogicalIndex &index) {
    /* Iterative three-color DFS from the start nodes. */
    enum class Mark : std::uint8_t { White, Grey, Black };
    std::map<node_id, Mark> mark;
    for (const auto &[id, node] : index.nodes()) mark[id] = Mark::White;

    struct Frame { node_id id; std::size_t entry; std::size_t target; };
    for (node_id sn : index.start_nodes()) {
        if (index.find(sn) == nullptr) return false;
        if (mark[sn] != Mark::White) continue;
        std::vector<Frame> stack{{sn, 0, 0}};
        mark[sn] = Mark::Grey;
        while (not stack.empty()) {
            Frame &f = stack.back();
            const LogicalNode *node = index.find(f.id);
            const auto *routing = node->routing ? &node->routing->entries : nullptr;
            bool descended = false;
            while (routing and f.entry < routing->size()) {
                const auto &targets = (*routing)[f.entry].targets;
                if (f.target >= targets.size()) { ++f.entry; f.target = 0; continue; }
                node_id child = targets[f.target++];
                if (index.find(child) == nullptr) return false;
                Mark m = mark[child];
                if (m == Mark::Grey) return false; // back edge: cycle
                if (m == Mark::White) {
                    mark[child] = Mark::Grey;
                    stack.push_back({child, 0, 0});
                    descended = true;
                    break;
                }
            }
            if (not descended) {
                mark[f.id] = Mark::Black;
                stack.pop_back();
            }
        }
    }

    for (const auto &[id, m] : mark)
        if (m != Mark::Black) return false; // unreachable node
    return true;
}

namespace detail {

std::vector<key_type> correctness_grid(const std::vector<Entry> &sorted_dataset) {
    std::vector<key_type> grid;
    grid.reserve(sorted_dataset.size() + 2);
    if (sorted_dataset.empty()) return grid;
    key_type min = sorted_dataset.front().key;
    key_type max = sorted_dataset.back().key;
    if (min > 0) grid.push_back(min - 1);
    for (const Entry &e : sorted_dataset)
        if (grid.empty() or grid.back() != e.key) grid.push_back(e.key);
    if (max < ~0ULL) grid.push_back(max + 1);
    return grid;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>>
sample_grid_pairs(std::size_t grid_size, std::size_t pairs, std::uint64_t seed) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    if (grid_size == 0) return out;
    out.reserve(pairs + 2);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(grid_size - 1));
    out.emplace_back(0, static_cast<std::uint32_t>(grid_size - 1)); // full span
    for (std::size_t i = 0; i + 1 < pairs; ++i) {
        std::uint32_t a = pick(rng);
        if (i % 2 == 0) { // point queries probe placement precisely
            out.emplace_back(a, a);
        } else {
            std::uint32_t b = pick(rng);
            if (a > b) std::swap(a, b);
            out.emplace_back(a, b);
        }
    }
    return out;
}

} // namespace detail

std::optional<RangeCounterexample>
find_correctness_violation(const LogicalIndex &index, const std::vector<Entry> &dataset,
                           const CorrectnessOptions &opt) {
    if (not check_complete(index))
        return RangeCounterexample{0, 0};
    return find_range_violation(dataset, [&](key_type l, key_type h, std::vector<Entry> &out) {
        out = range_query(index, l, h);
    }, opt);
}

} // namespace genidx
