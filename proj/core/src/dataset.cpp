#include "genidx/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "genidx/rng.hpp"

namespace genidx {

void Dataset::validate() const {
    for (std::size_t i = 1; i < keys.size(); ++i)
        if (not (keys[i - 1] < keys[i]))
            throw IngestError("dataset keys must be strictly increasing and unique");
}

Dataset gen_uni_dense(std::size_t n) {
    Dataset ds;
    ds.name = "uni_dense_" + std::to_string(n);
    ds.keys.resize(n);
    for (std::size_t i = 0; i < n; ++i) ds.keys[i] = i;
    return ds;
}

Dataset gen_skewed(std::size_t n, std::uint64_t seed, std::string name) {
    /* Fixed CDF anchors (domain fraction, probability mass): a heavy head, a
     * long sparse middle and a moderately dense tail. */
    static constexpr double anchors[][2] = {
        {0.00, 0.00}, {0.02, 0.30}, {0.10, 0.55}, {0.45, 0.70}, {0.80, 0.92}, {1.00, 1.00},
    };
    constexpr double domain = 9.0e18; // stays clear of the uint64 edge

    std::mt19937_64 rng(derive_seed(seed, 0xda7a5e7));
    std::unordered_set<key_type> seen;
    seen.reserve(n * 2);
    Dataset ds;
    ds.name = std::move(name);
    ds.keys.reserve(n);
    while (ds.keys.size() < n) {
        double u = pick_unit(rng);
        std::size_t seg = 1;
        while (seg + 1 < std::size(anchors) and u > anchors[seg][1]) ++seg;
        double u0 = anchors[seg - 1][1], u1 = anchors[seg][1];
        double x0 = anchors[seg - 1][0], x1 = anchors[seg][0];
        double x = x0 + (x1 - x0) * ((u - u0) / (u1 - u0));
        auto key = static_cast<key_type>(x * domain);
        if (seen.insert(key).second) ds.keys.push_back(key);
    }
    std::sort(ds.keys.begin(), ds.keys.end());
    return ds;
}

void save_dataset(const Dataset &ds, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (not out) throw IngestError("cannot open " + path + " for writing");
    std::uint64_t n = ds.keys.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(ds.keys.data()),
              static_cast<std::streamsize>(n * sizeof(key_type)));
    if (not out) throw IngestError("short write to " + path);
}

namespace {

std::vector<key_type> read_keys(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (not in) throw IngestError("cannot open " + path);
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (not in) throw IngestError(path + ": missing element count header");
    auto bytes = std::filesystem::file_size(path);
    if (bytes != sizeof(std::uint64_t) * (n + 1))
        throw IngestError(path + ": element count disagrees with file size");
    std::vector<key_type> keys(n);
    in.read(reinterpret_cast<char*>(keys.data()), static_cast<std::streamsize>(n * sizeof(key_type)));
    if (not in) throw IngestError(path + ": truncated key data");
    return keys;
}

} // namespace

Dataset load_dataset(const std::string &path) {
    Dataset ds;
    ds.name = std::filesystem::path(path).stem().string();
    ds.keys = read_keys(path);
    std::sort(ds.keys.begin(), ds.keys.end());
    ds.validate();
    return ds;
}

Dataset load_and_sample(const std::string &path, std::size_t target_n, std::uint64_t seed) {
    std::vector<key_type> keys = read_keys(path);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    if (keys.size() < target_n)
        throw IngestError(path + ": only " + std::to_string(keys.size()) +
                          " distinct keys, cannot sample " + std::to_string(target_n));

    Dataset ds;
    ds.name = std::filesystem::path(path).stem().string() + "_" + std::to_string(target_n);
    if (keys.size() == target_n) {
        ds.keys = std::move(keys);
        return ds;
    }

    /* Floyd's algorithm: target_n distinct positions drawn uniformly. */
    std::mt19937_64 rng(derive_seed(seed, 0x5a3317e));
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(target_n * 2);
    for (std::size_t j = keys.size() - target_n; j < keys.size(); ++j) {
        std::size_t t = pick_index(rng, j + 1);
        if (not chosen.insert(t).second) chosen.insert(j);
    }
    ds.keys.reserve(target_n);
    for (std::size_t pos : chosen) ds.keys.push_back(keys[pos]);
    std::sort(ds.keys.begin(), ds.keys.end());
    ds.validate();
    return ds;
}

} // namespace genidx
