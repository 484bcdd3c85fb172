#pragma once

#include <string>
#include <vector>

#include "genidx/types.hpp"

namespace genidx {

/** An indexable dataset: sorted unique 64-bit keys. The payload of key i is
 * its rank i, so entries() materializes (key, offset) pairs. */
struct Dataset {
    std::string name;
    std::vector<key_type> keys;

    std::size_t size() const { return keys.size(); }
    std::uint64_t fingerprint() const { return genidx::fingerprint(keys); }

    Entry entry(std::size_t i) const { return {keys[i], static_cast<payload_type>(i)}; }

    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        out.reserve(keys.size());
        for (std::size_t i = 0; i < keys.size(); ++i) out.push_back(entry(i));
        return out;
    }

    void validate() const; // strictly increasing keys
};

/** Dense uniform dataset: keys 0..n-1, so the CDF is exactly linear. */
Dataset gen_uni_dense(std::size_t n);

/** Synthetic skewed dataset drawn from a fixed piecewise-linear CDF over the
 * full 64-bit domain. Stands in for the real-world sampled datasets when no
 * source file is available; samples of different sizes share the same
 * distribution, so structures found on a small sample stay meaningful on
 * larger ones. Not real-world data. */
Dataset gen_skewed(std::size_t n, std::uint64_t seed, std::string name = "skewed");

/* Binary dataset file format: little-endian uint64 element count, followed by
 * that many little-endian uint64 keys. */

void save_dataset(const Dataset &ds, const std::string &path);

/** Loads a whole file; keys are sorted and must be unique. */
Dataset load_dataset(const std::string &path);

/** Uniform sample of target_n distinct keys from the file, sorted. */
Dataset load_and_sample(const std::string &path, std::size_t target_n, std::uint64_t seed);

} // namespace genidx
