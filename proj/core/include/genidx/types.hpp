#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace genidx {

using key_type = std::uint64_t;
using payload_type = std::uint64_t;
using node_id = std::uint32_t;

/** A single indexed record. The payload of a dataset entry is the key's rank
 * in the sorted key array, so a lookup effectively answers "position of key". */
struct Entry {
    key_type key;
    payload_type payload;

    friend bool operator==(const Entry&, const Entry&) = default;
    friend bool operator<(const Entry &a, const Entry &b) { return a.key < b.key; }
};

/* Error taxonomy. Contract violations are programming errors (invalid
 * layout/search pairs, malformed preconditions); the others are runtime
 * conditions a caller can reasonably hit. */
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string &what) : std::logic_error(what) {}
};

struct BuildError : std::runtime_error {
    explicit BuildError(const std::string &what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

struct IngestError : std::runtime_error {
    explicit IngestError(const std::string &what) : std::runtime_error(what) {}
};

/** Thrown when an index returns a result that disagrees with the precomputed
 * answers of a workload. Carries the offending query. */
struct CorrectnessViolation : std::runtime_error {
    key_type lo, hi;
    CorrectnessViolation(const std::string &what, key_type l, key_type h)
        : std::runtime_error(what), lo(l), hi(h) {}
};

/* 64-bit mixing and seed derivation. One master seed per experiment; every
 * random stream (bulkload choices, mutation draws, workload shuffles) derives
 * its own seed so that runs are reproducible end to end. */
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 0x51ed270b8a4e1337ULL));
}

/** FNV-1a, used for structural hashes and dataset/workload fingerprints. */
struct Fnv1a {
    std::uint64_t state = 0xcbf29ce484222325ULL;

    void bytes(const void *data, std::size_t n) {
        auto p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state ^= p[i];
            state *= 0x100000001b3ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void u8(std::uint8_t v) { bytes(&v, sizeof v); }
    std::uint64_t digest() const { return state; }
};

inline std::uint64_t fingerprint(const std::vector<key_type> &keys) {
    Fnv1a h;
    h.u64(keys.size());
    h.bytes(keys.data(), keys.size() * sizeof(key_type));
    return h.digest();
}

} // namespace genidx
