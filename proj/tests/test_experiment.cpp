#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "genidx/experiment.hpp"
#include "oracles.hpp"

using namespace genidx;
using namespace genidx::testing;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir(const std::string &tag) {
        path = fs::temp_directory_path() / ("genidx_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig tiny_cost_experiment(const fs::path &out) {
    ExperimentConfig cfg;
    cfg.name = "tiny";
    cfg.dataset.kind = DatasetSpec::Kind::UniDense;
    cfg.dataset.n = 4000;
    cfg.workload.kind = WorkloadSpec::Kind::Point;
    cfg.workload.count = 500;
    cfg.workload.seed = 3;
    cfg.genetic.g_max = 25;
    cfg.genetic.s_init = 5;
    cfg.genetic.s_max = 6;
    cfg.genetic.s_pi = 10;
    cfg.genetic.s_t_absolute = 5;
    cfg.genetic.master_seed = 9;
    cfg.mode = FitnessMode::CostModel;
    cfg.output_dir = out.string();
    return cfg;
}

} // namespace

TEST_CASE("experiment config JSON round trip and validation") {
    std::string text = R"({
      "format": "genidx.experiment",
      "version": 1,
      "name": "demo",
      "dataset": {"kind": "uni_dense", "n": 1000},
      "workload": {"kind": "range", "sel": 0.01, "count": 100, "seed": 5},
      "genetic": {"g_max": 10, "s_init": 3, "s_max": 4, "s_pi": 8, "s_t": 4, "q": 0, "c": 3},
      "fitness": {"mode": "cost_model", "range_mode": "lower_bound"},
      "baseline": {"kind": "btree", "leaf_count": 10, "leaf_fill": 100, "fanout": 5},
      "distributions": {"mutations": {"merge_vertical": 2.5}, "layouts": {"tree": 0}},
      "stop": {"baseline_ratio": 1.1, "shape": "single_hash"}
    })";
    ExperimentConfig cfg = ExperimentConfig::from_json(text);
    CHECK(cfg.name == "demo");
    CHECK(cfg.dataset.n == 1000);
    CHECK(cfg.workload.kind == WorkloadSpec::Kind::Range);
    CHECK(cfg.genetic.q == 0.0);
    CHECK(cfg.genetic.c == 3);
    CHECK(cfg.mode == FitnessMode::CostModel);
    CHECK(cfg.range_mode == RangeMode::LowerBoundOnly);
    CHECK(cfg.baseline.kind == BaselineSpec::Kind::Btree);
    CHECK(cfg.dists.kind_weights[static_cast<std::size_t>(MutationKind::MergeVertical)] == 2.5);
    CHECK(cfg.dists.layout_weights[static_cast<std::size_t>(DataLayout::Tree)] == 0.0);
    CHECK(cfg.stop.baseline_ratio == 1.1);
    CHECK(cfg.stop.shape == StopRule::Shape::SingleHash);

    CHECK_THROWS_AS(ExperimentConfig::from_json("{}"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json("{\"format\":\"genidx.experiment\",\"version\":99}"),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"format":"genidx.experiment","version":1,
        "workload":{"kind":"nope"}})"), ConfigError);
}

TEST_CASE("run_experiment writes the full artifact set") {
    TempDir tmp("exp");
    ExperimentConfig cfg = tiny_cost_experiment(tmp.path / "out");
    ExperimentResult result = run_experiment(cfg);

    CHECK(fs::exists(result.trace_path));
    CHECK(fs::exists(result.best_config_path));
    CHECK(fs::exists(result.baseline_path));
    CHECK(fs::exists(result.summary_path));
    CHECK(result.baseline_fitness > 0);
    CHECK(result.best_fitness > 0);

    SUBCASE("trace schema and monotone best fitness") {
        std::ifstream in(result.trace_path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "# genidx.trace.v1");
        std::getline(in, line);
        CHECK(line == "generation,best_fitness_ns,population_size,mutation_kind_applied,admitted_flag");
        double last = std::numeric_limits<double>::infinity();
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            double best = std::stod(line.substr(line.find(',') + 1));
            CHECK(best <= last);
            last = best;
        }
        CHECK(rows > 0);
    }

    SUBCASE("best config is loadable and rebuildable") {
        IndexConfig best = IndexConfig::load(result.best_config_path.string());
        Dataset ds = cfg.dataset.realize();
        PhysicalIndex rebuilt = build_from_config(best, ds);
        CHECK(structural_hash(rebuilt) == result.best_hash);
        CHECK(physically_correct(rebuilt, ds, {.exhaustive = false, .sample_pairs = 1500, .seed = 2}));
    }

    SUBCASE("cost-model artifacts are byte-reproducible") {
        std::string trace1 = read_file(result.trace_path);
        std::string config1 = read_file(result.best_config_path);
        ExperimentResult again = run_experiment(cfg);
        CHECK(read_file(again.trace_path) == trace1);
        CHECK(read_file(again.best_config_path) == config1);
    }
}

TEST_CASE("run_experiment honors the early-stop rule") {
    TempDir tmp("stop");
    ExperimentConfig cfg = tiny_cost_experiment(tmp.path / "out");
    cfg.genetic.g_max = 4000;
    cfg.stop.baseline_ratio = 20.0; // any population satisfies this immediately
    ExperimentResult result = run_experiment(cfg);
    CHECK(result.generations_run == 1);
}

TEST_CASE("invalid experiment inputs surface as errors") {
    ExperimentConfig cfg;
    cfg.dataset.kind = DatasetSpec::Kind::File;
    cfg.dataset.path = "/nonexistent/keys.bin";
    CHECK_THROWS(run_experiment(cfg));
}

TEST_CASE("upscale rows carry correctness and improvement") {
    TempDir tmp("upscale");
    ExperimentConfig cfg = tiny_cost_experiment(tmp.path / "out");
    cfg.dataset.kind = DatasetSpec::Kind::Skewed;
    cfg.dataset.n = 2000;
    cfg.dataset.seed = 77;
    cfg.genetic.g_max = 40;

    ExperimentResult result = run_experiment(cfg);
    IndexConfig best = IndexConfig::load(result.best_config_path.string());
    auto rows = run_upscale(cfg, best, {2000, 8000});
    REQUIRE(rows.size() == 2);
    for (const UpscaleRow &row : rows) {
        CHECK(row.correct);
        CHECK(row.fitness > 0);
        CHECK(row.initial_best_fitness > 0);
    }
    CHECK(fs::exists(tmp.path / "out" / "upscale.csv"));

    /* Upscaling to the origin size reproduces the origin fitness exactly in
     * cost mode. */
    CHECK(rows[0].fitness == doctest::Approx(result.best_fitness));
}

TEST_CASE("poc benchmark reports per-query means consistent with totals") {
    TempDir tmp("poc");
    ExperimentConfig cfg = tiny_cost_experiment(tmp.path / "out");
    cfg.dataset.n = 20000;
    cfg.workload.kind = WorkloadSpec::Kind::ThreePartitionMix;
    cfg.workload.count = 4000;
    cfg.workload.sel = 0.01;

    auto rows = run_poc_benchmark(cfg, {{PocContender::Kind::HandSpec, "hand_spec", ""},
                                        {PocContender::Kind::Btree, "btree", ""}},
                                  3);
    REQUIRE(rows.size() == 2);
    for (const PocRow &row : rows) {
        REQUIRE(row.run_totals_ns.size() == 3);
        double mean_total = 0;
        for (double t : row.run_totals_ns) mean_total += t;
        mean_total /= 3.0;
        /* mean per-query x query count recovers the mean total within 5%. */
        CHECK(row.mean_ns_per_query * 4000 == doctest::Approx(mean_total).epsilon(0.05));
    }
    CHECK(fs::exists(tmp.path / "out" / "poc.csv"));
}

TEST_CASE("GENIDX_OUT_DIR overrides the output directory") {
    TempDir tmp("envdir");
    ExperimentConfig cfg = tiny_cost_experiment(tmp.path / "ignored");
    setenv("GENIDX_OUT_DIR", (tmp.path / "env_out").c_str(), 1);
    ExperimentResult result = run_experiment(cfg);
    unsetenv("GENIDX_OUT_DIR");
    CHECK(result.trace_path.string().find("env_out") != std::string::npos);
    CHECK(fs::exists(result.trace_path));
}
