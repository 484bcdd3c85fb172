#pragma once

#include <random>

#include "genidx/config.hpp"
#include "genidx/dataset.hpp"
#include "genidx/physical.hpp"

namespace genidx {

/** Bottom-up bulkload parameters: equally filled leaves under a fixed-fanout
 * tree of range-partitioned inner nodes. With `fixed` unset, every node draws
 * its data layout and search method at random from the valid combinations
 * (hash excluded for inner nodes). */
struct BulkloadSpec {
    std::size_t leaf_count = 100;
    std::size_t leaf_fill = 1000;
    std::size_t fanout = 10;

    struct Fixed {
        DataLayout layout = DataLayout::SortedCol;
        SearchMethod search = SearchMethod::BinS;
    };
    std::optional<Fixed> fixed;

    /** Spec sized for a dataset: 100 leaves, fanout 10, fill to cover n. */
    static BulkloadSpec sized_for(std::size_t n) {
        BulkloadSpec s;
        s.leaf_fill = std::max<std::size_t>(1, (n + s.leaf_count - 1) / s.leaf_count);
        return s;
    }
};

/** One physical node containing all data. */
PhysicalIndex build_single_node(const Dataset &dataset, DataLayout layout, SearchMethod search,
                                std::size_t capacity = default_node_capacity);

/** Bottom-up bulkload into a B-tree-shaped structure with randomized (or
 * fixed) physical choices per node. The logical structure depends only on
 * the spec; the physical choices only on the rng stream. */
PhysicalIndex bulkload_btree_random(const Dataset &dataset, const BulkloadSpec &spec,
                                    std::mt19937_64 &rng,
                                    std::size_t capacity = default_node_capacity);

/** Rebuilds a configuration on a dataset: same topology, routing and physical
 * choices, data redistributed to the leaves by the configured partitioning.
 * Node capacities grow proportionally when the dataset outgrows the config's
 * origin dataset. */
PhysicalIndex build_from_config(const IndexConfig &config, const Dataset &dataset);

/** s_init independently seeded randomized bulkloads; member i derives its
 * seed from the master seed, so populations are reproducible. */
std::vector<PhysicalIndex> init_population(const Dataset &dataset, std::size_t s_init,
                                           std::uint64_t master_seed, const BulkloadSpec &spec,
                                           std::size_t capacity = default_node_capacity);

/** Hand-tuned three-partition structure: a sorted root splitting the key
 * space at 10% and 85% of the data into a hash node, a B-tree-style subtree
 * and another hash node. Matches the workload that queries the outer
 * partitions with points only. */
PhysicalIndex build_three_partition_handspec(const Dataset &dataset,
                                             std::size_t capacity = default_node_capacity);

} // namespace genidx
