#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "genidx/genetic.hpp"
#include "oracles.hpp"

using namespace genidx;
using namespace genidx::testing;

namespace {

GeneticParams quick_params(std::uint64_t seed, std::size_t generations = 30) {
    GeneticParams p;
    p.g_max = generations;
    p.s_init = 6;
    p.s_max = 8;
    p.s_pi = 12;
    p.s_t_absolute = 6;
    p.master_seed = seed;
    return p;
}

SearchOptions cost_options(std::size_t n) {
    SearchOptions o;
    o.mode = FitnessMode::CostModel;
    o.bulkload = BulkloadSpec::sized_for(n);
    return o;
}

Population toy_population(const std::vector<double> &fitnesses) {
    Population pop;
    Dataset ds = make_dataset({1, 2, 3});
    for (std::size_t i = 0; i < fitnesses.size(); ++i) {
        PopulationMember m;
        m.index = build_single_node(ds, DataLayout::SortedCol, SearchMethod::BinS);
        m.hash = i;
        m.fitness = fitnesses[i];
        m.seq = i;
        pop.members.push_back(std::move(m));
    }
    return pop;
}

} // namespace

TEST_CASE("median arithmetic") {
    CHECK(median_of({10, 12, 11, 30, 9}) == 11);
    CHECK(median_of({5}) == 5);
    CHECK(median_of({3, 1, 2}) == 2);
}

TEST_CASE("parameter validation") {
    GeneticParams p;
    CHECK_NOTHROW(p.validate());
    SUBCASE("even repetition count") { p.c = 4; CHECK_THROWS_AS(p.validate(), ContractViolation); }
    SUBCASE("chains unsupported") { p.s_ch = 2; CHECK_THROWS_AS(p.validate(), ContractViolation); }
    SUBCASE("tournament too large") { p.s_t_absolute = 51; CHECK_THROWS_AS(p.validate(), ContractViolation); }
    SUBCASE("both tournament forms") {
        p.s_t_percent = 50.0;
        CHECK_THROWS_AS(p.validate(), ContractViolation);
    }
    SUBCASE("percentage form") {
        p.s_t_absolute.reset();
        p.s_t_percent = 50.0;
        CHECK_NOTHROW(p.validate());
        CHECK(p.tournament_size(50) == 25);
        CHECK(p.tournament_size(3) == 2);
        p.s_t_percent = 100.0;
        CHECK(p.tournament_size(37) == 37);
    }
}

TEST_CASE("tournament selection: sample of one, full sample, percentile bars") {
    std::mt19937_64 rng(1);
    Population pop = toy_population({50, 10, 40, 20, 30});

    SUBCASE("sample of one is best and threshold at once") {
        Population single = toy_population({7});
        TournamentResult t = tournament_selection(single, 1, 50.0, rng);
        CHECK(t.best_index == 0);
        CHECK(t.threshold == 7);
    }

    SUBCASE("full sample finds the global best deterministically") {
        for (int i = 0; i < 20; ++i) {
            TournamentResult t = tournament_selection(pop, pop.members.size(), 50.0, rng);
            CHECK(pop.members[t.best_index].fitness == 10);
            CHECK(t.threshold == 30); // median of {10,20,30,40,50}
        }
    }

    SUBCASE("q=0 admits everything") {
        TournamentResult t = tournament_selection(pop, pop.members.size(), 0.0, rng);
        CHECK(std::isinf(t.threshold));
    }

    SUBCASE("q=100 demands beating the sample best") {
        TournamentResult t = tournament_selection(pop, pop.members.size(), 100.0, rng);
        CHECK(t.threshold == 10);
    }

    SUBCASE("empty population is an error") {
        Population empty;
        CHECK_THROWS_AS(tournament_selection(empty, 1, 50.0, rng), ContractViolation);
    }
}

TEST_CASE("fitness evaluation caches by structural hash") {
    Dataset ds = gen_uni_dense(2000);
    Workload wl = gen_point_workload(ds, 500, 3);

    EvaluatorOptions opt;
    opt.mode = FitnessMode::Measured;
    opt.repetitions = 3;
    FitnessEvaluator eval(ds, wl, opt);

    PhysicalIndex idx = build_single_node(ds, DataLayout::Hash, SearchMethod::HashS);
    std::uint64_t h = structural_hash(idx);

    const FitnessRecord &first = eval.evaluate(idx, h);
    CHECK(first.runs.size() == 3);
    CHECK(eval.measured_evaluations() == 1);
    CHECK(eval.cache_hits() == 0);

    /* Second evaluation: cached, no new measurements. */
    const FitnessRecord &second = eval.evaluate(idx, h);
    CHECK(&first == &second);
    CHECK(eval.measured_evaluations() == 1);
    CHECK(eval.cache_hits() == 1);
}

TEST_CASE("fitness evaluation aborts on wrong results") {
    Dataset ds = gen_uni_dense(100);
    Workload wl = gen_point_workload(ds, 200, 4);

    /* An index built over a *different* dataset misses keys. */
    Dataset shifted;
    shifted.name = "shifted";
    for (key_type k = 50; k < 150; ++k) shifted.keys.push_back(k);
    PhysicalIndex wrong = build_single_node(shifted, DataLayout::SortedCol, SearchMethod::BinS);

    EvaluatorOptions opt;
    FitnessEvaluator eval(ds, wl, opt);
    CHECK_THROWS_AS(eval.evaluate(wrong, structural_hash(wrong)), CorrectnessViolation);
}

TEST_CASE("cost-model fitness is deterministic and ranks sanely") {
    Dataset ds = gen_uni_dense(10000);
    EvaluatorOptions opt;
    opt.mode = FitnessMode::CostModel;

    PhysicalIndex hash = build_single_node(ds, DataLayout::Hash, SearchMethod::HashS);
    PhysicalIndex sorted = build_single_node(ds, DataLayout::SortedCol, SearchMethod::BinS);
    BulkloadSpec spec = BulkloadSpec::sized_for(ds.size());
    spec.fixed = BulkloadSpec::Fixed{};
    std::mt19937_64 rng(5);
    PhysicalIndex tree = bulkload_btree_random(ds, spec, rng);

    SUBCASE("points favor the hash table") {
        Workload wl = gen_point_workload(ds, 1000, 5);
        FitnessEvaluator eval(ds, wl, opt);
        double f_hash = eval.evaluate(hash, 1).median;
        double f_sorted = eval.evaluate(sorted, 2).median;
        double f_tree = eval.evaluate(tree, 3).median;
        CHECK(f_hash < f_sorted);
        CHECK(f_hash < f_tree);

        FitnessEvaluator eval2(ds, wl, opt);
        CHECK(eval2.evaluate(hash, 1).median == f_hash);
    }

    SUBCASE("ranges punish the hash table") {
        Workload wl = gen_range_workload(ds, 0.001, 1000, 6);
        FitnessEvaluator eval(ds, wl, opt);
        double f_hash = eval.evaluate(hash, 1).median;
        double f_sorted = eval.evaluate(sorted, 2).median;
        CHECK(f_sorted < f_hash);
    }
}

TEST_CASE("genetic search: fixed seed gives identical results in cost mode") {
    Dataset ds = gen_uni_dense(5000);
    Workload wl = gen_point_workload(ds, 600, 7);

    SearchResult a = genetic_search(quick_params(11), ds, wl, cost_options(ds.size()));
    SearchResult b = genetic_search(quick_params(11), ds, wl, cost_options(ds.size()));
    CHECK(a.best_hash == b.best_hash);
    CHECK(a.best_fitness == b.best_fitness);
    CHECK(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].kind == b.trace[i].kind);
        CHECK(a.trace[i].admitted == b.trace[i].admitted);
    }

    SearchResult c = genetic_search(quick_params(12), ds, wl, cost_options(ds.size()));
    CHECK(a.best_hash != c.best_hash); // different seed explores differently
}

TEST_CASE("genetic search: capacity and trace invariants") {
    Dataset ds = gen_uni_dense(5000);
    Workload wl = gen_mix_workload(ds, {PointSpec{}}, {RangeSpec{0.001, 0, 0}},
                                   {0.8, 0.2}, 600, 8);
    GeneticParams params = quick_params(21, 40);
    SearchResult result = genetic_search(params, ds, wl, cost_options(ds.size()));

    REQUIRE(not result.trace.empty());
    double last = std::numeric_limits<double>::infinity();
    for (const TraceRow &row : result.trace) {
        CHECK(row.population_size <= params.s_pi);
        CHECK(row.best_fitness <= last);
        last = row.best_fitness;
    }
    CHECK(result.best_fitness == result.trace.back().best_fitness);
    CHECK(result.measured_evaluations >= params.s_init);
    /* Cache soundness: every distinct structure is measured at most once. */
    CHECK(result.measured_evaluations <= params.s_init + result.trace.size());
}

TEST_CASE("genetic search: g_max=0 returns the initial population's best") {
    Dataset ds = gen_uni_dense(2000);
    Workload wl = gen_point_workload(ds, 300, 9);
    GeneticParams params = quick_params(31, 0);
    SearchResult result = genetic_search(params, ds, wl, cost_options(ds.size()));
    CHECK(result.trace.empty());
    CHECK(result.generations_run == 0);
    CHECK(result.best_config.meta.found_generation == 0);
    CHECK(result.best_shape.nodes >= 1);
}

TEST_CASE("genetic search: early stop callback") {
    Dataset ds = gen_uni_dense(2000);
    Workload wl = gen_point_workload(ds, 300, 10);
    GeneticParams params = quick_params(41, 100);
    SearchOptions opt = cost_options(ds.size());
    std::size_t seen = 0;
    opt.on_generation = [&](const GenerationStats &stats) {
        ++seen;
        return stats.generation < 4; // stop after five generations
    };
    SearchResult result = genetic_search(params, ds, wl, opt);
    CHECK(seen == 5);
    CHECK(result.generations_run == 5);
}

TEST_CASE("measured mode on a small scale keeps the hash ahead on points") {
    /* Direction only. Median-of-5 wall-clock on 10K keys. */
    Dataset ds = gen_uni_dense(10000);
    Workload wl = gen_point_workload(ds, 2000, 11);
    EvaluatorOptions opt;
    opt.repetitions = 5;
    FitnessEvaluator eval(ds, wl, opt);

    PhysicalIndex hash = build_single_node(ds, DataLayout::Hash, SearchMethod::HashS);
    BulkloadSpec spec = BulkloadSpec::sized_for(ds.size());
    std::mt19937_64 rng(12);
    PhysicalIndex tree = bulkload_btree_random(ds, spec, rng);

    double f_hash = eval.evaluate(hash, 1).median;
    double f_tree = eval.evaluate(tree, 2).median;
    MESSAGE("hash ", f_hash, " ns vs random tree ", f_tree, " ns");
    CHECK(f_hash < f_tree);
}
