#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "genidx/genetic.hpp"

namespace genidx {

/** Dataset source of an experiment. File datasets are sampled down to n keys
 * unless n is 0 (whole file). */
struct DatasetSpec {
    enum class Kind : std::uint8_t { UniDense, Skewed, File };
    Kind kind = Kind::UniDense;
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    std::string path;

    /** Materializes the dataset, optionally at a different size (upscaling).
     * Skewed datasets regenerate from the same distribution; file datasets
     * resample. */
    Dataset realize(std::size_t size_override = 0) const;
};

struct WorkloadSpec {
    enum class Kind : std::uint8_t { Point, PointNormal, Range, Mix8020, Mix, ThreePartitionMix };
    Kind kind = Kind::Point;
    std::size_t count = 10000;
    std::uint64_t seed = 7;
    std::size_t idx_min = 0, idx_max = 0; // 0 = whole dataset
    double sel = 0.001;
    double mean_idx = 0.0, stddev_idx = 0.0;
    std::vector<PointSpec> points;
    std::vector<RangeSpec> ranges;
    std::vector<double> proportions;

    Workload realize(const Dataset &ds) const;
};

struct BaselineSpec {
    enum class Kind : std::uint8_t { SingleHash, Btree, HandSpec, ConfigFile };
    Kind kind = Kind::SingleHash;
    BulkloadSpec btree; // Kind::Btree
    std::string path;   // Kind::ConfigFile

    PhysicalIndex build(const Dataset &ds, std::size_t capacity) const;
    std::string describe() const;
};

/** Early-stop rule: stop once the population best is within `baseline_ratio`
 * of the baseline fitness, optionally also requiring a converged shape. */
struct StopRule {
    std::optional<double> baseline_ratio;
    enum class Shape : std::uint8_t { Any, SingleHash, SortedColMax3 };
    Shape shape = Shape::Any;
};

struct ExperimentConfig {
    static constexpr int version = 1;

    std::string name = "experiment";
    DatasetSpec dataset;
    WorkloadSpec workload;
    GeneticParams genetic;
    MutationDistributions dists;
    BaselineSpec baseline;
    FitnessMode mode = FitnessMode::Measured;
    CostWeights weights;
    RangeMode range_mode = RangeMode::Materialize;
    std::optional<BulkloadSpec> bulkload; // default: sized for the dataset
    std::size_t capacity = default_node_capacity;
    std::string output_dir = "out";
    std::vector<std::size_t> upscale_sizes;
    StopRule stop;

    static ExperimentConfig from_json(const std::string &text);
    static ExperimentConfig load(const std::string &path);
    std::string to_json(int indent = 2) const;

    /** Output directory after the GENIDX_OUT_DIR override. */
    std::filesystem::path resolved_output_dir() const;
};

struct ExperimentResult {
    double baseline_fitness = 0.0;
    double best_fitness = 0.0;
    double ratio = 0.0; // best / baseline
    IndexShape best_shape;
    std::size_t generations_run = 0;
    std::uint64_t best_hash = 0;
    std::filesystem::path trace_path;
    std::filesystem::path best_config_path;
    std::filesystem::path baseline_path;
    std::filesystem::path summary_path;
};

/** Full experiment: build and measure the baseline, run the genetic search
 * (streaming the trace), write trace.csv, best_config.json, baseline.json
 * and summary.json into the output directory. */
ExperimentResult run_experiment(const ExperimentConfig &config);

struct UpscaleRow {
    std::size_t size = 0;
    double fitness = 0.0;
    double initial_best_fitness = 0.0;
    double improvement = 0.0; // initial / found
    bool correct = false;
};

/** Rebuilds a found configuration on the configured dataset at each size,
 * verifies correctness on a sampled grid and compares its fitness against
 * the upscaled best individual of the initial population. Writes
 * upscale.csv next to the other artifacts. */
std::vector<UpscaleRow> run_upscale(const ExperimentConfig &config,
                                    const IndexConfig &best_config,
                                    const std::vector<std::size_t> &sizes);

struct PocContender {
    enum class Kind : std::uint8_t { HandSpec, Btree, SingleHash, ConfigFile };
    Kind kind = Kind::HandSpec;
    std::string name;
    std::string path; // ConfigFile
};

struct PocRow {
    std::string name;
    double mean_ns_per_query = 0.0;
    double stddev_ns = 0.0;
    std::vector<double> run_totals_ns;
};

/** Average-lookup-time comparison: builds every contender, warms it up, runs
 * the workload `runs` times (shuffled before each execution) and reports the
 * mean per-query latency and its standard deviation. Range queries execute
 * as lower-bound lookups. Writes poc.csv. */
std::vector<PocRow> run_poc_benchmark(const ExperimentConfig &config,
                                      const std::vector<PocContender> &contenders,
                                      std::size_t runs = 5);

} // namespace genidx
