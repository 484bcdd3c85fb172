#include <benchmark/benchmark.h>

#include <random>

#include "genidx/builder.hpp"
#include "genidx/rng.hpp"
#include "genidx/workload.hpp"

using namespace genidx;

namespace {

Dataset &bench_dataset() {
    static Dataset ds = gen_uni_dense(100000);
    return ds;
}

PhysicalIndex make_contender(const std::string &which) {
    Dataset &ds = bench_dataset();
    if (which == "hash")
        return build_single_node(ds, DataLayout::Hash, SearchMethod::HashS);
    if (which == "sorted_bins")
        return build_single_node(ds, DataLayout::SortedCol, SearchMethod::BinS);
    if (which == "sorted_ints")
        return build_single_node(ds, DataLayout::SortedCol, SearchMethod::IntS);
    BulkloadSpec spec; // 100 x 1000, fanout 10
    spec.fixed = BulkloadSpec::Fixed{};
    std::mt19937_64 rng(1);
    return bulkload_btree_random(ds, spec, rng);
}

void point_bench(benchmark::State &state, const std::string &which) {
    PhysicalIndex idx = make_contender(which);
    Workload wl = gen_point_workload(bench_dataset(), 4096, 9);
    ExecScratch scratch;
    std::size_t i = 0;
    for (auto _ : state) {
        const Query &q = wl.queries[i++ & 4095];
        benchmark::DoNotOptimize(idx.execute_point(q.lo, scratch));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void range_bench(benchmark::State &state, const std::string &which) {
    PhysicalIndex idx = make_contender(which);
    Workload wl = gen_range_workload(bench_dataset(), 0.001, 4096, 9);
    ExecScratch scratch;
    std::vector<Entry> out;
    std::size_t i = 0;
    for (auto _ : state) {
        const Query &q = wl.queries[i++ & 4095];
        out.clear();
        idx.execute_range(q.lo, q.hi, scratch, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

} // namespace

static void BM_Point_SingleHash(benchmark::State &s) { point_bench(s, "hash"); }
static void BM_Point_SortedBinS(benchmark::State &s) { point_bench(s, "sorted_bins"); }
static void BM_Point_SortedIntS(benchmark::State &s) { point_bench(s, "sorted_ints"); }
static void BM_Point_Btree(benchmark::State &s) { point_bench(s, "btree"); }
static void BM_Range_SortedBinS(benchmark::State &s) { range_bench(s, "sorted_bins"); }
static void BM_Range_SortedIntS(benchmark::State &s) { range_bench(s, "sorted_ints"); }
static void BM_Range_Btree(benchmark::State &s) { range_bench(s, "btree"); }

BENCHMARK(BM_Point_SingleHash);
BENCHMARK(BM_Point_SortedBinS);
BENCHMARK(BM_Point_SortedIntS);
BENCHMARK(BM_Point_Btree);
BENCHMARK(BM_Range_SortedBinS);
BENCHMARK(BM_Range_SortedIntS);
BENCHMARK(BM_Range_Btree);

BENCHMARK_MAIN();
