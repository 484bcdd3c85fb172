/* Acceptance suite: nine end-to-end criteria, one test case each. Every case
 * prints a single [PASS]/[FAIL] line; ctest registers them individually.
 * Criteria 5-8 measure wall-clock fitness and take minutes each. */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "genidx/experiment.hpp"
#include "genidx/rng.hpp"
#include "oracles.hpp"

using namespace genidx;
using namespace genidx::testing;

namespace {

struct Verdict {
    bool pass = true;
    std::string details;

    void require(bool ok, const std::string &what) {
        if (not ok) {
            pass = false;
            if (not details.empty()) details += "; ";
            details += what;
        }
    }
};

void report(int criterion, const char *title, const Verdict &v) {
    std::printf("[%s] criterion %d: %s%s%s\n", v.pass ? "PASS" : "FAIL", criterion, title,
                v.details.empty() ? "" : " -- ", v.details.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(v.pass, "criterion ", criterion, ": ", v.details);
}

CorrectnessOptions sampled_opt(std::uint64_t seed, std::size_t pairs = 1200) {
    return CorrectnessOptions{false, pairs, seed};
}

/* Baselines and search runs shared by criteria 5-7. */

struct RediscoveryRun {
    double ratio = 0.0;
    IndexShape shape;
    std::size_t generations = 0;
    double baseline = 0.0;
    double best = 0.0;
    IndexConfig config;
};

RediscoveryRun rediscovery_run(const Dataset &ds, const Workload &wl,
                               const PhysicalIndex &baseline, std::uint64_t master_seed,
                               std::size_t g_max, double fitness_bar,
                               const std::function<bool(const IndexShape&)> &shape_goal) {
    GeneticParams params;
    params.g_max = g_max;
    params.master_seed = master_seed;

    EvaluatorOptions eopt;
    eopt.repetitions = params.c;
    eopt.seed = derive_seed(master_seed, 0xacce);
    FitnessEvaluator baseline_eval(ds, wl, eopt);
    double baseline_fitness = baseline_eval.evaluate(baseline, structural_hash(baseline)).median;

    SearchOptions opt;
    opt.bulkload = BulkloadSpec{}; // 100 x 1000, fanout 10
    opt.keep_trace = false;
    double bar = fitness_bar * baseline_fitness;
    opt.on_generation = [&](const GenerationStats &stats) {
        /* Stop once this run satisfies both clauses of its criterion. */
        if (stats.best_fitness > bar) return true;
        return not shape_goal(stats.best->shape());
    };

    SearchResult result = genetic_search(params, ds, wl, opt);
    return {result.best_fitness / baseline_fitness, result.best_shape, result.generations_run,
            baseline_fitness, result.best_fitness, std::move(result.best_config)};
}

std::string shape_brief(const IndexShape &s) {
    return std::to_string(s.nodes) + "n/d" + std::to_string(s.depth);
}

} // namespace

/*----------------------------------------------------------------------------
 * 1. Correctness oracle suite: every built or mutated index over 1,000-key
 *    datasets answers every exhaustive (l,h) grid query like the filter.
 *--------------------------------------------------------------------------*/
TEST_CASE("criterion 1: correctness oracle suite") {
    Verdict v;
    std::size_t checked = 0;

    auto exhaustive = [&](const PhysicalIndex &idx, const Dataset &ds, const std::string &what) {
        auto violation = physical_violation(idx, ds);
        ++checked;
        v.require(not violation.has_value(),
                  what + " violates [" + (violation ? std::to_string(violation->l) : "") + ", " +
                      (violation ? std::to_string(violation->h) : "") + "]");
    };

    for (int which = 0; which < 2; ++which) {
        Dataset ds = which == 0 ? gen_uni_dense(1000) : gen_skewed(1000, 17);
        std::string tag = which == 0 ? "uni/" : "skew/";

        /* Single nodes over every valid layout/search pair. */
        for (DataLayout l : all_layouts)
            for (SearchMethod s : compatible_methods(l))
                exhaustive(build_single_node(ds, l, s), ds,
                           tag + std::string(to_string(l)) + "+" + std::string(to_string(s)));

        /* Randomized bulkloads of different shapes. */
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            BulkloadSpec spec;
            spec.leaf_count = 10 + 15 * seed;
            spec.leaf_fill = (ds.size() + spec.leaf_count - 1) / spec.leaf_count;
            spec.fanout = 3 + seed;
            std::mt19937_64 rng(100 + seed);
            exhaustive(bulkload_btree_random(ds, spec, rng), ds,
                       tag + "bulkload seed " + std::to_string(seed));
        }

        /* The hand-tuned three-partition structure. */
        exhaustive(build_three_partition_handspec(ds), ds, tag + "hand spec");

        /* Mutated indexes: random chains over a bulkloaded tree. */
        std::mt19937_64 rng(500 + which);
        MutationDistributions dists;
        BulkloadSpec spec;
        spec.leaf_count = 10;
        spec.leaf_fill = 100;
        spec.fanout = 3;
        PhysicalIndex idx = bulkload_btree_random(ds, spec, rng);
        std::size_t mutated = 0;
        while (mutated < 8) {
            MutationKind kind = draw_mutation(dists, rng);
            auto node = draw_node(idx, kind, dists, rng);
            if (not node) continue;
            auto choice = draw_phys(dists, kind, idx, *node, rng);
            if (not choice) continue;
            auto mut = apply_mutation(idx, kind, *node, *choice, rng, dists);
            if (not mut) continue;
            ++mutated;
            exhaustive(*mut, ds, tag + "mutation chain step " + std::to_string(mutated));
            idx = std::move(*mut);
        }
    }

    v.details = std::to_string(checked) + " indexes, exhaustive grids" +
                (v.pass ? "" : "; " + v.details);
    report(1, "correctness oracle suite", v);
}

/*----------------------------------------------------------------------------
 * 2. Search-method equivalence on 10^4 random (array, probe) cases.
 *--------------------------------------------------------------------------*/
TEST_CASE("criterion 2: search-method equivalence") {
    Verdict v;
    std::mt19937_64 rng(20240);
    constexpr std::array<SearchMethod, 4> ordered{
        SearchMethod::BinS, SearchMethod::IntS, SearchMethod::ExpS, SearchMethod::LinRegS};

    std::size_t cases = 0;
    for (int trial = 0; trial < 10000 and v.pass; ++trial) {
        std::size_t n = pick_index(rng, 1500);
        std::vector<key_type> keys;
        keys.reserve(n);
        if (trial % 2 == 0) {
            key_type k = rng() % 5000;
            for (std::size_t i = 0; i < n; ++i) keys.push_back(k += 1 + rng() % 9);
        } else {
            for (std::size_t i = 0; i < n; ++i) keys.push_back(rng());
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        }
        LinRegModel model = fit_linreg(keys);
        key_type probe = (trial % 3 == 0 and not keys.empty())
            ? keys[pick_index(rng, keys.size())]
            : rng();
        std::size_t want = scan_lower_bound(keys, probe);
        for (SearchMethod m : ordered) {
            ++cases;
            if (lower_bound_pos(keys, probe, m, &model) != want) {
                v.require(false, std::string(to_string(m)) + " diverges from scan at n=" +
                                     std::to_string(keys.size()));
                break;
            }
        }
    }

    /* linregS soundness: every stored key of every fitted array is found. */
    for (int trial = 0; trial < 60 and v.pass; ++trial) {
        std::vector<key_type> keys;
        std::size_t n = 1 + pick_index(rng, 3000);
        if (trial % 2 == 0) {
            key_type k = 0;
            for (std::size_t i = 0; i < n; ++i) keys.push_back(k += 1 + rng() % 5);
        } else {
            for (std::size_t i = 0; i < n; ++i) keys.push_back(rng());
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        }
        LinRegModel model = fit_linreg(keys);
        for (std::size_t i = 0; i < keys.size(); ++i) {
            ++cases;
            if (lower_bound_pos(keys, keys[i], SearchMethod::LinRegS, &model) != i) {
                v.require(false, "linregS missed a stored key");
                break;
            }
        }
    }

    v.details = std::to_string(cases) + " method/probe cases" + (v.pass ? "" : "; " + v.details);
    report(2, "search-method equivalence", v);
}

/*----------------------------------------------------------------------------
 * 3. Mutation preservation: 10^3 applications per kind keep indexes correct;
 *    inverse pairs produce query-equivalent indexes.
 *--------------------------------------------------------------------------*/
TEST_CASE("criterion 3: mutation preservation") {
    Verdict v;
    Dataset uni = gen_uni_dense(1000);
    Dataset skew = gen_skewed(1000, 33);
    MutationDistributions dists;
    std::mt19937_64 rng(303);

    /* Immutable base indexes; every attempt derives an ephemeral variant so
     * each kind always finds applicable nodes. */
    std::vector<std::pair<PhysicalIndex, const Dataset*>> pool;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Dataset &ds = seed % 2 == 0 ? uni : skew;
        BulkloadSpec spec;
        spec.leaf_count = 8 + 6 * (seed % 3);
        spec.leaf_fill = (ds.size() + spec.leaf_count - 1) / spec.leaf_count;
        spec.fanout = 3 + seed % 3;
        std::mt19937_64 r(40 + seed);
        pool.emplace_back(bulkload_btree_random(ds, spec, r), &ds);
    }

    for (MutationKind kind : all_mutation_kinds) {
        std::size_t successes = 0, attempts = 0;
        while (successes < 1000 and attempts < 40000) {
            ++attempts;
            const auto &[original, ds] = pool[pick_index(rng, pool.size())];
            PhysicalIndex base = original;
            /* Shape variety: a short random chain before the kind under test. */
            for (std::size_t pre = pick_index(rng, 3); pre > 0; --pre) {
                MutationKind any = draw_mutation(dists, rng);
                auto n = draw_node(base, any, dists, rng);
                if (not n) continue;
                auto ch = draw_phys(dists, any, base, *n, rng);
                if (not ch) continue;
                if (auto m = apply_mutation(base, any, *n, *ch, rng, dists))
                    base = std::move(*m);
            }
            auto node = draw_node(base, kind, dists, rng);
            if (not node) continue;
            auto choice = draw_phys(dists, kind, base, *node, rng);
            if (not choice) continue;
            auto mut = apply_mutation(base, kind, *node, *choice, rng, dists);
            if (not mut) continue;
            ++successes;

            bool ok;
            if (successes <= 8) { // exhaustive grid for the first few per kind
                ok = physically_correct(*mut, *ds);
            } else {
                ok = physically_correct(*mut, *ds, sampled_opt(attempts));
            }
            if (not ok) {
                v.require(false, std::string(to_string(kind)) + " broke correctness");
                break;
            }
        }
        v.require(successes >= 1000, std::string(to_string(kind)) + " only applied " +
                                         std::to_string(successes) + " times");
        if (not v.pass) break;
    }

    /* Inverse pairs: split then merge back, compare against the original on
     * the full grid. */
    auto query_all = [](const PhysicalIndex &idx, key_type l, key_type h) {
        std::vector<Entry> out = idx.execute_range(l, h);
        std::sort(out.begin(), out.end());
        return out;
    };
    auto equivalent = [&](const PhysicalIndex &a, const PhysicalIndex &b, const Dataset &ds) {
        for (std::size_t i = 0; i < ds.size(); i += 61)
            for (std::size_t j = i; j < ds.size(); j += 97)
                if (query_all(a, ds.keys[i], ds.keys[j]) != query_all(b, ds.keys[i], ds.keys[j]))
                    return false;
        return physically_correct(a, ds) and physically_correct(b, ds);
    };

    for (std::uint64_t seed = 0; seed < 3 and v.pass; ++seed) {
        const Dataset &ds = seed % 2 == 0 ? uni : skew;
        BulkloadSpec spec;
        spec.leaf_count = 12;
        spec.leaf_fill = (ds.size() + 11) / 12;
        spec.fanout = 4;
        std::mt19937_64 r(700 + seed);
        PhysicalIndex base = bulkload_btree_random(ds, spec, r);
        node_id root = base.start_nodes().front();

        /* M4 then M3 on the produced siblings. */
        std::vector<node_id> kids = children_of(base, root);
        for (node_id child : kids) {
            const PhysicalNode &c = base.node(child);
            if ((c.routes() ? c.ri->size() : c.dt.size()) < 2) continue;
            auto split = m4_split_horizontal(base, root, child, 2, r);
            if (not split) continue;
            std::vector<node_id> after = children_of(*split, split->start_nodes().front());
            bool merged_back = false;
            for (std::size_t i = 0; i + 1 < after.size() and not merged_back; ++i) {
                node_id s = after[i + 1];
                auto merged = m3_merge_horizontal(*split, split->start_nodes().front(), after[i],
                                                  std::span<const node_id>(&s, 1));
                if (merged) {
                    v.require(equivalent(*merged, base, ds), "M4->M3 pair not equivalent");
                    merged_back = true;
                }
            }
            v.require(merged_back, "M4->M3 could not merge the produced pair");
            break;
        }

        /* M6 then M5 on the produced pair. */
        auto grown = m6_split_vertical(base, root, 2, r);
        v.require(grown.has_value(), "M6 on the root aborted");
        if (grown) {
            node_id r2 = grown->start_nodes().front();
            bool merged_back = false;
            for (node_id c : children_of(*grown, r2)) {
                if (not grown->node(c).routes()) continue;
                auto back = m5_merge_vertical(*grown, r2, c);
                if (back) {
                    v.require(equivalent(*back, base, ds), "M6->M5 pair not equivalent");
                    merged_back = true;
                    break;
                }
            }
            v.require(merged_back, "M6->M5 could not merge the produced pair");
        }
    }

    report(3, "mutation preservation (1000 applications per kind)", v);
}

/*----------------------------------------------------------------------------
 * 4. Algorithm-1 fidelity under the deterministic cost model.
 *--------------------------------------------------------------------------*/
TEST_CASE("criterion 4: deterministic cost-model fidelity") {
    Verdict v;
    Dataset ds = gen_uni_dense(100000);
    Workload wl = gen_point_workload(ds, 10000, 7);

    GeneticParams params; // paper defaults: s_max=10, s_pi=50, s_t=25, s_init=10, q=50
    params.g_max = 120;
    params.master_seed = 404;

    SearchOptions opt;
    opt.mode = FitnessMode::CostModel;
    opt.bulkload = BulkloadSpec{};

    SearchResult a = genetic_search(params, ds, wl, opt);
    SearchResult b = genetic_search(params, ds, wl, opt);

    v.require(a.best_hash == b.best_hash, "final structural hashes differ across reruns");
    v.require(a.best_fitness == b.best_fitness, "final fitness differs across reruns");
    v.require(a.trace.size() == b.trace.size(), "trace lengths differ");

    double last = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        if (a.trace[i].population_size > params.s_pi) {
            v.require(false, "population exceeded s_pi");
            break;
        }
        if (a.trace[i].best_fitness > last) {
            v.require(false, "best fitness increased in the trace");
            break;
        }
        last = a.trace[i].best_fitness;
        if (b.trace[i].kind != a.trace[i].kind or b.trace[i].admitted != a.trace[i].admitted) {
            v.require(false, "mutation sequences diverge across reruns");
            break;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "final hash %016llx over %zu attempts",
                  static_cast<unsigned long long>(a.best_hash), a.trace.size());
    v.details = v.pass ? buf : v.details;
    report(4, "Algorithm-1 fidelity (cost model, fixed seed)", v);
}

/*----------------------------------------------------------------------------
 * 5. Baseline rediscovery on points (measured): five seeded searches against
 *    the single-hash baseline.
 *--------------------------------------------------------------------------*/
TEST_CASE("criterion 5: point-workload baseline rediscovery (measured)") {
    Verdict v;
    Dataset ds = gen_uni_dense(100000);
    Workload wl = gen_point_workload(ds, 10000, 7);
    PhysicalIndex baseline = build_single_node(ds, DataLayout::Hash, SearchMethod::HashS);

    std::size_t fitness_ok = 0, structure_ok = 0;
    std::string runs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RediscoveryRun run = rediscovery_run(
            ds, wl, baseline, seed, 2000, 1.10,
            [](const IndexShape &s) { return s.single_hash_node(); });
        if (run.ratio <= 1.10) ++fitness_ok;
        if (run.shape.single_hash_node()) ++structure_ok;
        char buf[64];
        std::snprintf(buf, sizeof buf, " seed%llu: %.3fx %s@g%zu",
                      static_cast<unsigned long long>(seed), run.ratio,
                      shape_brief(run.shape).c_str(), run.generations);
        runs += buf;
    }
    v.require(fitness_ok >= 4, "fitness <= 1.10x baseline in only " +
                                   std::to_string(fitness_ok) + "/5 runs");
    v.require(structure_ok >= 3, "single hash node in only " +
                                     std::to_string(structure_ok) + "/5 runs");
    v.details += "fitness_ok " + std::to_string(fitness_ok) + "/5, single_hash " +
                 std::to_string(structure_ok) + "/5;" + runs;
    report(5, "point-workload rediscovery", v);
}

/*----------------------------------------------------------------------------
 * 6. Range and mixed rediscovery (measured) against the bulkloaded B-tree.
 *--------------------------------------------------------------------------*/
TEST_CASE("criterion 6: range/mixed rediscovery (measured)") {
    Verdict v;
    Dataset ds = gen_uni_dense(100000);
    BaselineSpec btree;
    btree.kind = BaselineSpec::Kind::Btree;
    PhysicalIndex baseline = btree.build(ds, default_node_capacity);

    auto shape_goal = [](const IndexShape &s) {
        return s.nodes <= 3 and s.sorted_col_only();
    };

    for (int which = 0; which < 2; ++which) {
        Workload wl = which == 0
            ? gen_range_workload(ds, 0.001, 10000, 7)
            : gen_mix_workload(ds, {PointSpec{}}, {RangeSpec{0.01, 0, 0}}, {0.8, 0.2}, 10000, 7);
        const char *tag = which == 0 ? "range" : "mix";

        std::size_t fitness_ok = 0, structure_ok = 0;
        std::string runs;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            RediscoveryRun run =
                rediscovery_run(ds, wl, baseline, 50 + seed, 2000, 1.15, shape_goal);
            if (run.ratio <= 1.15) ++fitness_ok;
            if (shape_goal(run.shape)) ++structure_ok;
            char buf[64];
            std::snprintf(buf, sizeof buf, " seed%llu: %.3fx %s@g%zu",
                          static_cast<unsigned long long>(seed), run.ratio,
                          shape_brief(run.shape).c_str(), run.generations);
            runs += buf;
        }
        v.require(fitness_ok >= 4, std::string(tag) + ": fitness <= 1.15x baseline in only " +
                                       std::to_string(fitness_ok) + "/5 runs");
        v.require(structure_ok >= 3, std::string(tag) + ": <=3-node sorted_col structure in only " +
                                         std::to_string(structure_ok) + "/5 runs");
        v.details += std::string(tag) + "[fitness " + std::to_string(fitness_ok) +
                     "/5, shape " + std::to_string(structure_ok) + "/5:" + runs + "] ";
    }
    report(6, "range/mixed rediscovery", v);
}

/*----------------------------------------------------------------------------
 * 7. Upscaling: configs found at 100K keep at least half their relative
 *    improvement when rebuilt at 1M.
 *--------------------------------------------------------------------------*/
TEST_CASE("criterion 7: upscaling retains improvement") {
    Verdict v;
    std::size_t ok_runs = 0;
    std::string runs;

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Dataset origin = gen_skewed(100000, 900);
        Workload origin_wl = gen_point_workload(origin, 10000, 7);

        GeneticParams params;
        params.g_max = 300;
        params.master_seed = 7000 + seed;
        SearchOptions opt;
        opt.bulkload = BulkloadSpec{};
        opt.keep_trace = false;
        SearchResult found = genetic_search(params, origin, origin_wl, opt);

        /* The comparison config: best of the same initial population. */
        EvaluatorOptions eopt;
        eopt.seed = derive_seed(params.master_seed, 0xacce);
        FitnessEvaluator origin_eval(origin, origin_wl, eopt);
        std::optional<IndexConfig> initial;
        double initial_fitness = 0;
        for (std::size_t i = 0; i < params.s_init; ++i) {
            std::mt19937_64 r(derive_seed(params.master_seed, 0x1217 + i));
            PhysicalIndex idx = bulkload_btree_random(origin, opt.bulkload, r);
            double f = origin_eval.evaluate(idx, structural_hash(idx)).median;
            if (not initial or f < initial_fitness) {
                initial = to_config(idx);
                initial->meta.origin_size = origin.size();
                initial_fitness = f;
            }
        }
        double improvement_origin = (initial_fitness - found.best_fitness) / initial_fitness;

        /* Rebuild both at 1M from the same distribution. */
        Dataset large = gen_skewed(1000000, 900);
        Workload large_wl = gen_point_workload(large, 10000, 7);
        PhysicalIndex up_found = build_from_config(found.best_config, large);
        PhysicalIndex up_initial = build_from_config(*initial, large);

        v.require(up_found.shape().nodes == found.best_shape.nodes,
                  "upscaled topology changed");
        bool correct = physically_correct(up_found, large, sampled_opt(seed, 10000));
        v.require(correct, "upscaled index failed the sampled grid check");

        FitnessEvaluator large_eval(large, large_wl, eopt);
        double f_found = large_eval.evaluate(up_found, structural_hash(up_found)).median;
        double f_initial = large_eval.evaluate(up_initial, structural_hash(up_initial)).median;
        double improvement_up = (f_initial - f_found) / f_initial;

        bool retained = improvement_up >= 0.5 * improvement_origin;
        if (retained and correct) ++ok_runs;
        char buf[96];
        std::snprintf(buf, sizeof buf, " seed%llu: origin %.1f%% -> 1M %.1f%%",
                      static_cast<unsigned long long>(seed), improvement_origin * 100,
                      improvement_up * 100);
        runs += buf;
    }
    v.require(ok_runs >= 4, "improvement retained in only " + std::to_string(ok_runs) + "/5 runs");
    v.details += std::to_string(ok_runs) + "/5 runs retained;" + runs;
    report(7, "upscaling retains improvement", v);
}

/*----------------------------------------------------------------------------
 * 8. Proof-of-concept ordering at 1M keys: the hand-tuned three-partition
 *    structure beats the uniform B-tree on the mixed workload, 5 of 5 runs.
 *--------------------------------------------------------------------------*/
TEST_CASE("criterion 8: three-partition hand spec beats the uniform B-tree") {
    Verdict v;
    Dataset ds = gen_uni_dense(1000000);
    Workload wl = gen_three_partition_mix(ds, 0.01, 100000, 11);

    PhysicalIndex hand = build_three_partition_handspec(ds);
    BaselineSpec spec;
    spec.kind = BaselineSpec::Kind::Btree;
    spec.btree = BulkloadSpec::sized_for(ds.size());
    PhysicalIndex btree = spec.build(ds, default_node_capacity);

    std::size_t wins = 0;
    std::string runs;
    for (std::uint64_t round = 1; round <= 5; ++round) {
        EvaluatorOptions eopt;
        eopt.range_mode = RangeMode::LowerBoundOnly;
        eopt.repetitions = 5;
        eopt.seed = round;
        FitnessEvaluator eval(ds, wl, eopt);
        double f_hand = eval.evaluate(hand, 1).median;
        double f_btree = eval.evaluate(btree, 2).median;
        if (f_hand < f_btree) ++wins;
        char buf[64];
        std::snprintf(buf, sizeof buf, " r%llu: %.0f vs %.0f ns/q(x1e4)",
                      static_cast<unsigned long long>(round), f_hand / 10.0, f_btree / 10.0);
        runs += buf;
    }
    v.require(wins == 5, "hand spec won only " + std::to_string(wins) + "/5 rounds");
    v.details += std::to_string(wins) + "/5 rounds;" + runs;
    report(8, "three-partition hand spec vs uniform B-tree at 1M", v);
}

/*----------------------------------------------------------------------------
 * 9. Range_sel cardinality: every generated Range_0.001 query over 100K keys
 *    returns exactly 100 tuples.
 *--------------------------------------------------------------------------*/
TEST_CASE("criterion 9: range selectivity cardinality") {
    Verdict v;
    Dataset ds = gen_uni_dense(100000);
    Workload wl = gen_range_workload(ds, 0.001, 10000, 13);
    PhysicalIndex idx = build_single_node(ds, DataLayout::SortedCol, SearchMethod::BinS);

    ExecScratch scratch;
    std::vector<Entry> out;
    std::size_t wrong = 0;
    for (const Query &q : wl.queries) {
        out.clear();
        idx.execute_range(q.lo, q.hi, scratch, out);
        if (out.size() != 100) ++wrong;
    }
    v.require(wrong == 0, std::to_string(wrong) + " queries returned != 100 tuples");
    v.details += std::to_string(wl.size()) + " queries, 100 tuples each" +
                 (v.pass ? "" : "; " + v.details);
    report(9, "range selectivity cardinality", v);
}
