#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace genidx {

/* Physical data layouts of a node part. sorted_col keeps keys and values in
 * two parallel dense arrays, sorted_row keeps the pairs in one array (same
 * contract, row-major), hash is a chained hash table, tree an ordered tree. */
enum class DataLayout : std::uint8_t { SortedCol, SortedRow, Hash, Tree };

/* Intra-node search algorithms. Tree layouts expose exactly one native
 * ordered descent which is modeled as BinS; hash layouts only probe. */
enum class SearchMethod : std::uint8_t { Scan, BinS, IntS, ExpS, HashS, LinRegS };

inline constexpr std::array<DataLayout, 4> all_layouts{
    DataLayout::SortedCol, DataLayout::SortedRow, DataLayout::Hash, DataLayout::Tree};

inline constexpr std::array<SearchMethod, 6> all_search_methods{
    SearchMethod::Scan, SearchMethod::BinS, SearchMethod::IntS,
    SearchMethod::ExpS, SearchMethod::HashS, SearchMethod::LinRegS};

/** Valid (layout, search) combinations. Sorted layouts admit every ordered
 * method, hash admits only the hash probe, tree only its native descent. */
constexpr bool compatible(DataLayout l, SearchMethod s) {
    switch (l) {
        case DataLayout::SortedCol:
        case DataLayout::SortedRow:
            return s != SearchMethod::HashS;
        case DataLayout::Hash:
            return s == SearchMethod::HashS;
        case DataLayout::Tree:
            return s == SearchMethod::BinS;
    }
    return false;
}

inline constexpr std::array<SearchMethod, 5> sorted_methods{
    SearchMethod::Scan, SearchMethod::BinS, SearchMethod::IntS,
    SearchMethod::ExpS, SearchMethod::LinRegS};

inline std::span<const SearchMethod> compatible_methods(DataLayout l) {
    static constexpr std::array<SearchMethod, 1> hash_only{SearchMethod::HashS};
    static constexpr std::array<SearchMethod, 1> tree_only{SearchMethod::BinS};
    switch (l) {
        case DataLayout::SortedCol:
        case DataLayout::SortedRow: return sorted_methods;
        case DataLayout::Hash: return hash_only;
        case DataLayout::Tree: return tree_only;
    }
    return {};
}

constexpr std::string_view to_string(DataLayout l) {
    switch (l) {
        case DataLayout::SortedCol: return "sorted_col";
        case DataLayout::SortedRow: return "sorted_row";
        case DataLayout::Hash: return "hash";
        case DataLayout::Tree: return "tree";
    }
    return "?";
}

constexpr std::string_view to_string(SearchMethod s) {
    switch (s) {
        case SearchMethod::Scan: return "scan";
        case SearchMethod::BinS: return "binS";
        case SearchMethod::IntS: return "intS";
        case SearchMethod::ExpS: return "expS";
        case SearchMethod::HashS: return "hashS";
        case SearchMethod::LinRegS: return "linregS";
    }
    return "?";
}

bool parse_layout(std::string_view name, DataLayout &out);
bool parse_search(std::string_view name, SearchMethod &out);

} // namespace genidx
