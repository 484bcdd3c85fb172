#pragma once

#include <algorithm>
#include <vector>

#include "genidx/dataset.hpp"
#include "genidx/logical.hpp"
#include "genidx/physical.hpp"

/* Test-side oracles. These stay independent of the index query paths they
 * check: plain scans and binary searches over raw sorted arrays. */

namespace genidx::testing {

/** Brute-force range filter over a dataset: the reference result set. */
inline std::vector<Entry> brute_force_range(const std::vector<Entry> &sorted, key_type l,
                                            key_type h) {
    std::vector<Entry> out;
    for (const Entry &e : sorted)
        if (e.key >= l and e.key <= h) out.push_back(e);
    return out;
}

/** Reference lower bound: position of the first key >= probe. */
inline std::size_t scan_lower_bound(const std::vector<key_type> &keys, key_type probe) {
    std::size_t i = 0;
    while (i < keys.size() and keys[i] < probe) ++i;
    return i;
}

inline Dataset make_dataset(std::vector<key_type> keys, std::string name = "test") {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    Dataset ds;
    ds.name = std::move(name);
    ds.keys = std::move(keys);
    return ds;
}

/** The running-example relation: keys {1, 2, 6, 7, 11, 12}, payloads are the
 * ranks in the sorted key array. */
inline Dataset running_example() {
    return make_dataset({2, 7, 1, 6, 12, 11}, "running_example");
}

/** Grid-checks a physical index against its dataset. */
inline std::optional<RangeCounterexample>
physical_violation(const PhysicalIndex &index, const Dataset &ds,
                   const CorrectnessOptions &opt = {}) {
    ExecScratch scratch;
    return find_range_violation(ds.entries(), [&](key_type l, key_type h, std::vector<Entry> &out) {
        index.execute_range(l, h, scratch, out);
    }, opt);
}

inline bool physically_correct(const PhysicalIndex &index, const Dataset &ds,
                               const CorrectnessOptions &opt = {}) {
    return not physical_violation(index, ds, opt).has_value();
}

} // namespace genidx::testing
