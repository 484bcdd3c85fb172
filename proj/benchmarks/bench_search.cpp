#include <benchmark/benchmark.h>

#include <random>

#include "genidx/rng.hpp"
#include "genidx/search.hpp"

using namespace genidx;

namespace {

struct Fixture {
    std::vector<key_type> keys;
    std::vector<key_type> probes;
    LinRegModel model;

    explicit Fixture(std::size_t n, bool dense) {
        std::mt19937_64 rng(7);
        keys.reserve(n);
        if (dense) {
            for (std::size_t i = 0; i < n; ++i) keys.push_back(i * 3);
        } else {
            for (std::size_t i = 0; i < n; ++i) keys.push_back(rng());
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        }
        model = fit_linreg(keys);
        for (std::size_t i = 0; i < 1024; ++i)
            probes.push_back(keys[pick_index(rng, keys.size())]);
    }
};

void lower_bound_bench(benchmark::State &state, SearchMethod method) {
    Fixture f(static_cast<std::size_t>(state.range(0)), state.range(1) == 1);
    std::size_t i = 0;
    for (auto _ : state) {
        key_type probe = f.probes[i++ & 1023];
        benchmark::DoNotOptimize(lower_bound_pos(f.keys, probe, method, &f.model));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

} // namespace

#define LB_BENCH(name, method)                                        \
    static void name(benchmark::State &state) {                      \
        lower_bound_bench(state, method);                             \
    }                                                                 \
    BENCHMARK(name)->ArgsProduct({{1000, 100000}, {0, 1}})

LB_BENCH(BM_LowerBound_Scan, SearchMethod::Scan);
LB_BENCH(BM_LowerBound_BinS, SearchMethod::BinS);
LB_BENCH(BM_LowerBound_IntS, SearchMethod::IntS);
LB_BENCH(BM_LowerBound_ExpS, SearchMethod::ExpS);
LB_BENCH(BM_LowerBound_LinRegS, SearchMethod::LinRegS);

BENCHMARK_MAIN();
