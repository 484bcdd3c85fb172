#pragma once

#include <functional>
#include <unordered_map>

#include "genidx/builder.hpp"
#include "genidx/config.hpp"
#include "genidx/mutation.hpp"
#include "genidx/workload.hpp"

namespace genidx {

/** Hyperparameters of the genetic search loop. Defaults are the tuned
 * values: s_max=10, s_pi=50, s_t=25, s_init=10, q=50%, and a fitness median
 * over c=5 runs. The tournament size is either absolute or a percentage of
 * the current population. */
struct GeneticParams {
    std::size_t g_max = 2000;  // generations
    std::size_t s_init = 10;   // initial population size
    std::size_t s_max = 10;    // mutations per generation
    std::size_t s_pi = 50;     // population capacity
    std::optional<std::size_t> s_t_absolute = 25;
    std::optional<double> s_t_percent;
    double q = 50.0;           // insertion percentile; 0 admits every mutant
    std::size_t s_ch = 1;      // mutation chain length (chains gave no benefit)
    std::size_t c = 5;         // fitness repetitions, odd for an exact median
    std::uint64_t master_seed = 42;

    void validate() const;
    std::size_t tournament_size(std::size_t population_size) const;
};

enum class FitnessMode : std::uint8_t { Measured, CostModel };

/** Fitness of one index on one workload: the median runtime over c runs
 * (nanoseconds, or cost units in cost-model mode). */
struct FitnessRecord {
    double median = 0.0;
    std::vector<double> runs;
    std::uint64_t workload_fingerprint = 0;
    std::int64_t timestamp_ns = 0;
};

struct EvaluatorOptions {
    FitnessMode mode = FitnessMode::Measured;
    CostWeights weights{};
    RangeMode range_mode = RangeMode::Materialize;
    std::size_t repetitions = 5;
    std::uint64_t seed = 1;
    /* Short workloads repeat inside one timed run until this much time is
     * measured; the recorded runtime is per workload pass. Keeps medians
     * stable against scheduler jitter on sub-millisecond workloads. */
    std::uint64_t min_run_ns = 8000000;
};

/** Executes workloads against indexes and caches fitness by structural hash,
 * so no configuration is ever measured twice. Every measured evaluation runs
 * one untimed warm-up pass that verifies each query against precomputed
 * answers; the timed passes guard a checksum. The workload is reshuffled
 * before every execution. */
class FitnessEvaluator {
public:
    FitnessEvaluator(const Dataset &dataset, const Workload &workload, EvaluatorOptions opt);

    const FitnessRecord &evaluate(const PhysicalIndex &index, std::uint64_t hash);

    const FitnessRecord *lookup(std::uint64_t hash) const;

    std::size_t measured_evaluations() const { return measured_; }
    std::size_t cache_hits() const { return hits_; }
    const Workload &workload() const { return workload_; }

private:
    FitnessRecord measure(const PhysicalIndex &index);
    double run_once(const PhysicalIndex &index, const std::vector<Query> &order,
                    bool verify, double *cost_out, std::size_t passes = 1) const;

    const Dataset &dataset_;
    Workload workload_;
    EvaluatorOptions opt_;
    std::vector<std::uint64_t> expected_;  // per-query checksum contribution
    std::uint64_t expected_total_ = 0;
    std::unordered_map<std::uint64_t, FitnessRecord> cache_;
    std::size_t measured_ = 0;
    std::size_t hits_ = 0;
    std::uint64_t shuffle_counter_ = 0;
    mutable ExecScratch scratch_;
    mutable std::vector<Entry> range_buf_;
};

/** Exact median of a sample (lower median for even sizes; the repetition
 * count c is odd, making the fitness median exact). */
double median_of(std::vector<double> values);

struct PopulationMember {
    PhysicalIndex index;
    std::uint64_t hash = 0;
    double fitness = 0.0;
    std::uint64_t seq = 0;      // insertion order, deterministic tie-break
    std::size_t generation = 0; // generation the individual was found in
};

/** The population: at most s_pi members, no two sharing a structural hash. */
class Population {
public:
    std::vector<PopulationMember> members;

    bool contains(std::uint64_t hash) const {
        for (const PopulationMember &m : members)
            if (m.hash == hash) return true;
        return false;
    }

    /** Position of the fittest member (ties resolve to the oldest). */
    std::size_t best() const;
};

struct TournamentResult {
    std::size_t best_index = 0; // population position of the sample's fittest
    double threshold = 0.0;     // q-th percentile admission bar
    std::vector<std::uint64_t> sample_seqs;
};

/** Draws a uniform sample of size s_t, returns its fittest member and the
 * fitness value a mutant must reach to be admitted: the q-th percentile of
 * the sample (q=50 is the median, q=100 the sample's best, q=0 admits
 * everything). */
TournamentResult tournament_selection(const Population &population, std::size_t s_t, double q,
                                      std::mt19937_64 &rng);

/** One row of the generation trace: the population state after a mutation
 * attempt. The best fitness column is non-increasing over a run. */
struct TraceRow {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    std::size_t population_size = 0;
    MutationKind kind = MutationKind::ChangeLayout;
    bool admitted = false;
};

struct GenerationStats {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    std::uint64_t best_hash = 0;
    const PhysicalIndex *best = nullptr;
    std::size_t population_size = 0;
};

struct SearchOptions {
    FitnessMode mode = FitnessMode::Measured;
    CostWeights weights{};
    RangeMode range_mode = RangeMode::Materialize;
    BulkloadSpec bulkload{};
    std::size_t capacity = default_node_capacity;
    MutationDistributions dists{};
    bool keep_trace = true;
    std::function<void(const TraceRow&)> on_trace;
    std::function<bool(const GenerationStats&)> on_generation; // return false to stop
};

struct SearchResult {
    IndexConfig best_config;
    double best_fitness = 0.0;
    std::uint64_t best_hash = 0;
    IndexShape best_shape;
    std::vector<TraceRow> trace;
    std::size_t generations_run = 0;
    std::size_t measured_evaluations = 0;
    std::size_t cache_hits = 0;
    std::size_t aborted_mutations = 0;
    std::size_t duplicate_mutations = 0;
};

/** The genetic search: initialize a population of randomized bulkloads, then
 * per generation pick the tournament winner, breed s_max mutants from it and
 * admit those at least as fit as the tournament's percentile threshold,
 * evicting the unfittest sampled member when the population is full. Returns
 * the fittest individual of the final population. */
SearchResult genetic_search(const GeneticParams &params, const Dataset &dataset,
                            const Workload &workload, const SearchOptions &options = {});

} // namespace genidx
