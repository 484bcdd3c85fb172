#include "genidx/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "genidx/rng.hpp"

namespace genidx {

std::uint64_t Workload::fingerprint() const {
    Fnv1a h;
    h.u64(dataset_fingerprint);
    h.u64(queries.size());
    h.bytes(queries.data(), queries.size() * sizeof(Query));
    return h.digest();
}

namespace {

void require_subdomain(const Dataset &ds, std::size_t idx_min, std::size_t idx_max) {
    if (idx_min >= idx_max or idx_max > ds.size())
        throw ContractViolation("workload index domain must satisfy 0 <= idx_min < idx_max <= n");
}

} // namespace

Workload gen_point_workload(const Dataset &ds, std::size_t idx_min, std::size_t idx_max,
                            std::size_t count, std::uint64_t seed) {
    require_subdomain(ds, idx_min, idx_max);
    Workload wl;
    wl.name = "point";
    wl.dataset_fingerprint = ds.fingerprint();
    wl.queries.reserve(count);
    std::mt19937_64 rng(derive_seed(seed, 0x9057));
    for (std::size_t i = 0; i < count; ++i) {
        key_type k = ds.keys[idx_min + pick_index(rng, idx_max - idx_min)];
        wl.queries.push_back({k, k});
    }
    return wl;
}

Workload gen_point_normal_workload(const Dataset &ds, double mean_idx, double stddev_idx,
                                   std::size_t count, std::uint64_t seed) {
    if (ds.size() == 0) throw ContractViolation("workload needs a non-empty dataset");
    Workload wl;
    wl.name = "point_normal";
    wl.dataset_fingerprint = ds.fingerprint();
    wl.queries.reserve(count);
    std::mt19937_64 rng(derive_seed(seed, 0x4ca2));
    double max_idx = static_cast<double>(ds.size() - 1);
    for (std::size_t i = 0; i < count; ++i) {
        double pos = std::round(pick_normal(rng, mean_idx, stddev_idx));
        pos = std::clamp(pos, 0.0, max_idx);
        key_type k = ds.keys[static_cast<std::size_t>(pos)];
        wl.queries.push_back({k, k});
    }
    return wl;
}

Workload gen_range_workload(const Dataset &ds, double sel, std::size_t idx_min,
                            std::size_t idx_max, std::size_t count, std::uint64_t seed) {
    require_subdomain(ds, idx_min, idx_max);
    if (sel < 0.0 or sel > 1.0) throw ContractViolation("selectivity must be in [0, 1]");
    auto span = static_cast<std::size_t>(std::llround(sel * static_cast<double>(ds.size())));
    if (span == 0) span = 1; // sel 0 degenerates to point queries
    if (idx_min + span > idx_max)
        throw ContractViolation("selectivity span does not fit the workload index domain");

    Workload wl;
    wl.name = "range";
    wl.dataset_fingerprint = ds.fingerprint();
    wl.queries.reserve(count);
    std::mt19937_64 rng(derive_seed(seed, 0x7a41));
    std::size_t lo_choices = idx_max - idx_min - span + 1;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t lo = idx_min + pick_index(rng, lo_choices);
        wl.queries.push_back({ds.keys[lo], ds.keys[lo + span - 1]});
    }
    return wl;
}

Workload gen_mix_workload(const Dataset &ds, const std::vector<PointSpec> &points,
                          const std::vector<RangeSpec> &ranges,
                          const std::vector<double> &proportions, std::size_t count,
                          std::uint64_t seed) {
    if (proportions.size() != points.size() + ranges.size())
        throw ContractViolation("one proportion per point/range spec required");
    double total = 0.0;
    for (double p : proportions) {
        if (p < 0.0) throw ContractViolation("proportions must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ContractViolation("proportions must sum to 1");

    /* Per-spec counts; the last positive proportion absorbs rounding drift. */
    std::vector<std::size_t> counts(proportions.size(), 0);
    std::size_t assigned = 0;
    std::size_t last = proportions.size();
    for (std::size_t i = 0; i < proportions.size(); ++i) {
        counts[i] = static_cast<std::size_t>(std::llround(proportions[i] * static_cast<double>(count)));
        assigned += counts[i];
        if (proportions[i] > 0.0) last = i;
    }
    if (last < counts.size()) {
        if (assigned < count) counts[last] += count - assigned;
        else if (assigned > count) counts[last] -= std::min(counts[last], assigned - count);
    }

    Workload wl;
    wl.name = "mix";
    wl.dataset_fingerprint = ds.fingerprint();
    wl.queries.reserve(count);
    std::size_t spec_idx = 0;
    for (const PointSpec &p : points) {
        std::size_t idx_max = p.idx_max == 0 ? ds.size() : p.idx_max;
        Workload part = gen_point_workload(ds, p.idx_min, idx_max, counts[spec_idx],
                                           derive_seed(seed, 0xa100 + spec_idx));
        wl.queries.insert(wl.queries.end(), part.queries.begin(), part.queries.end());
        ++spec_idx;
    }
    for (const RangeSpec &r : ranges) {
        std::size_t idx_max = r.idx_max == 0 ? ds.size() : r.idx_max;
        Workload part = gen_range_workload(ds, r.sel, r.idx_min, idx_max, counts[spec_idx],
                                           derive_seed(seed, 0xa100 + spec_idx));
        wl.queries.insert(wl.queries.end(), part.queries.begin(), part.queries.end());
        ++spec_idx;
    }
    std::mt19937_64 rng(derive_seed(seed, 0x3u));
    shuffle_stable(wl.queries, rng);
    return wl;
}

Workload gen_three_partition_mix(const Dataset &ds, double range_sel, std::size_t count,
                                 std::uint64_t seed) {
    std::size_t n = ds.size();
    std::size_t cut1 = n / 10;
    std::size_t cut2 = n * 85 / 100;
    Workload wl = gen_mix_workload(
        ds,
        {{0, cut1}, {cut1, cut2}, {cut2, n}},
        {{range_sel, cut1, cut2}},
        {0.2, 0.1, 0.5, 0.2}, count, seed);
    wl.name = "three_partition_mix";
    return wl;
}

void save_workload_csv(const Workload &wl, const std::string &path) {
    std::ofstream out(path);
    if (not out) throw IngestError("cannot open " + path + " for writing");
    out << "# genidx.workload.v1\n";
    out << "type,lo,hi\n";
    for (const Query &q : wl.queries)
        out << (q.is_point() ? "point" : "range") << ',' << q.lo << ',' << q.hi << '\n';
}

} // namespace genidx
