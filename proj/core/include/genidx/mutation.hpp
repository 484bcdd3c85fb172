#pragma once

#include <array>
#include <optional>
#include <random>
#include <span>
#include <string_view>

#include "genidx/physical.hpp"

namespace genidx {

/* The six fundamental mutations. Every application preserves the correctness
 * of the index: a mutated index answers every range query exactly like its
 * input. Operations return nullopt when a precondition fails (the attempt is
 * aborted and the caller moves on). */
enum class MutationKind : std::uint8_t {
    ChangeLayout,    // M1: swap the data layout of one part
    ChangeSearch,    // M2: swap the search method of one part
    MergeHorizontal, // M3: fold sibling nodes into one
    SplitHorizontal, // M4: split a child into k siblings
    MergeVertical,   // M5: hoist a child into its parent
    SplitVertical,   // M6: push part of a node one level down
};

inline constexpr std::array<MutationKind, 6> all_mutation_kinds{
    MutationKind::ChangeLayout,    MutationKind::ChangeSearch,
    MutationKind::MergeHorizontal, MutationKind::SplitHorizontal,
    MutationKind::MergeVertical,   MutationKind::SplitVertical};

constexpr std::string_view to_string(MutationKind k) {
    switch (k) {
        case MutationKind::ChangeLayout: return "change_layout";
        case MutationKind::ChangeSearch: return "change_search";
        case MutationKind::MergeHorizontal: return "merge_horizontal";
        case MutationKind::SplitHorizontal: return "split_horizontal";
        case MutationKind::MergeVertical: return "merge_vertical";
        case MutationKind::SplitVertical: return "split_vertical";
    }
    return "?";
}

enum class NodePart : std::uint8_t { Routing, Data };

struct PhysicalChoice {
    DataLayout layout = DataLayout::SortedCol;
    SearchMethod search = SearchMethod::BinS;
};

/** The three sampling distributions of the search loop. MD weighs the six
 * mutation kinds; ND is uniform over the nodes a kind applies to; PD weighs
 * (layout, search) pairs, with invalid combinations fixed at zero. All
 * weights can be overridden from the experiment config. */
struct MutationDistributions {
    std::array<double, 6> kind_weights{1, 1, 1, 1, 1, 1};
    /* sorted_col, sorted_row, hash, tree. The row variant exists in the
     * framework but is not part of the exercised pool by default. */
    std::array<double, 4> layout_weights{1, 0, 1, 1};
    /* scan, binS, intS, expS, hashS, linregS; the default pool matches the
     * exercised experiment set, linregS stays available via overrides. */
    std::array<double, 6> search_weights{1, 1, 1, 1, 1, 0};

    double layout_weight(DataLayout l) const {
        return layout_weights[static_cast<std::size_t>(l)];
    }
    double search_weight(SearchMethod s) const {
        return search_weights[static_cast<std::size_t>(s)];
    }
};

/** Distinct children of a node, in routing-entry order. */
std::vector<node_id> children_of(const PhysicalIndex &index, node_id id);

/* Draws. Each returns nullopt when the context admits nothing. */

MutationKind draw_mutation(const MutationDistributions &dists, std::mt19937_64 &rng);

std::optional<node_id> draw_node(const PhysicalIndex &index, MutationKind kind,
                                 const MutationDistributions &dists, std::mt19937_64 &rng);

std::optional<PhysicalChoice> draw_phys(const MutationDistributions &dists, MutationKind kind,
                                        const PhysicalIndex &index, node_id node,
                                        std::mt19937_64 &rng);

/* The six operations. */

std::optional<PhysicalIndex> m1_change_layout(const PhysicalIndex &index, node_id node,
                                              NodePart part, DataLayout new_layout,
                                              std::mt19937_64 &rng,
                                              const MutationDistributions &dists = {});

std::optional<PhysicalIndex> m2_change_search(const PhysicalIndex &index, node_id node,
                                              NodePart part, SearchMethod new_search);

/** Folds every source into the target; sources must be siblings of the
 * target under `parent` with matching partitioning. Multi-source merges run
 * as a sequence of single-source merges. */
std::optional<PhysicalIndex> m3_merge_horizontal(const PhysicalIndex &index, node_id parent,
                                                 node_id target, std::span<const node_id> sources);

/** Splits `child` into k sibling nodes on contiguous key sub-ranges. */
std::optional<PhysicalIndex> m4_split_horizontal(const PhysicalIndex &index, node_id parent,
                                                 node_id child, std::size_t k,
                                                 std::mt19937_64 &rng,
                                                 const MutationDistributions &dists = {},
                                                 std::optional<PhysicalChoice> choice = {});

/** Hoists `child` into `parent`: an internal child's routing entries are
 * spliced into the parent; a leaf child that is the parent's only routed
 * child collapses the pair into a single data node. */
std::optional<PhysicalIndex> m5_merge_vertical(const PhysicalIndex &index, node_id parent,
                                               node_id child);

/** Pushes part of a node one level down, into k-1 new children (k parts in
 * total). For k=2 a leaf delegates its whole data set to one new child and an
 * internal node delegates the median half of its routing entries. */
std::optional<PhysicalIndex> m6_split_vertical(const PhysicalIndex &index, node_id node,
                                               std::size_t k, std::mt19937_64 &rng,
                                               const MutationDistributions &dists = {},
                                               std::optional<PhysicalChoice> choice = {});

/** One full mutation step as the search loop performs it: picks the concrete
 * subjects (part, target/source, child, side) at random and dispatches. */
std::optional<PhysicalIndex> apply_mutation(const PhysicalIndex &index, MutationKind kind,
                                            node_id node, PhysicalChoice choice,
                                            std::mt19937_64 &rng,
                                            const MutationDistributions &dists = {});

} // namespace genidx
