#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genidx/physical.hpp"

namespace genidx {

/** Serializable description of one physical node: partitioning parameters,
 * the physical choices for both parts, the routing entries (with children as
 * ordinals into the `children` array) and the child descriptors. Range
 * partitionings keep their boundaries in the routing entries (first boundary
 * is always 0); bin partitionings carry their parameters in `part`. */
struct NodeConfig {
    std::optional<PartitioningFunction> part;

    struct Ri {
        DataLayout layout = DataLayout::SortedCol;
        SearchMethod search = SearchMethod::BinS;
        /* (dom, child ordinals); one child may be referenced by several
         * entries, e.g. after horizontal merges. */
        std::vector<std::pair<std::uint64_t, std::vector<std::size_t>>> entries;
    };
    std::optional<Ri> ri;

    DataLayout dt_layout = DataLayout::SortedCol;
    SearchMethod dt_search = SearchMethod::BinS;

    std::vector<NodeConfig> children;
};

/** The genome of the genetic search: a whole physical index configuration,
 * without the data. Round-trips losslessly through JSON. */
struct IndexConfig {
    static constexpr int version = 1;

    std::vector<NodeConfig> roots;
    std::size_t capacity_limit = default_node_capacity;

    /* Volatile metadata; excluded from the structural hash. */
    struct Metadata {
        std::string dataset_name;
        std::uint64_t dataset_fingerprint = 0;
        std::uint64_t origin_size = 0;
        std::optional<std::uint64_t> found_generation;
        std::optional<double> found_fitness;
    };
    Metadata meta;

    /** 64-bit digest of the canonical serialization (structure, physical
     * choices, partition parameters and capacity; metadata excluded). Two
     * configs hash equal iff their canonical serializations are byte-equal. */
    std::uint64_t structural_hash() const;

    std::string to_json(int indent = 2) const;
    static IndexConfig from_json(const std::string &text);

    void save(const std::string &path) const;
    static IndexConfig load(const std::string &path);
};

/** Extracts the configuration of an index. The index must be tree-shaped
 * (every node reachable through exactly one parent); throws ConfigError for
 * cross-subtree sharing. */
IndexConfig to_config(const PhysicalIndex &index);

inline std::uint64_t structural_hash(const PhysicalIndex &index) {
    return to_config(index).structural_hash();
}

} // namespace genidx
