#include "genidx/genetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "genidx/rng.hpp"

namespace genidx {

/*----------------------------------------------------------------------------
 * Parameters
 *--------------------------------------------------------------------------*/

void GeneticParams::validate() const {
    if (s_init < 1) throw ContractViolation("s_init must be at least 1");
    if (s_max < 1) throw ContractViolation("s_max must be at least 1");
    if (s_pi < 1) throw ContractViolation("s_pi must be at least 1");
    if (s_init > s_pi) throw ContractViolation("s_init cannot exceed the population capacity");
    if (s_ch != 1) throw ContractViolation("mutation chains longer than 1 are not supported");
    if (c < 1 or c % 2 == 0) throw ContractViolation("c must be a positive odd repetition count");
    if (q < 0.0 or q > 100.0) throw ContractViolation("q must be a percentile in [0, 100]");
    if (s_t_absolute.has_value() == s_t_percent.has_value())
        throw ContractViolation("exactly one of s_t_absolute and s_t_percent must be set");
    if (s_t_absolute and (*s_t_absolute < 1 or *s_t_absolute > s_pi))
        throw ContractViolation("s_t must satisfy 1 <= s_t <= s_pi");
    if (s_t_percent and (*s_t_percent <= 0.0 or *s_t_percent > 100.0))
        throw ContractViolation("s_t percentage must be in (0, 100]");
}

std::size_t GeneticParams::tournament_size(std::size_t population_size) const {
    std::size_t st = s_t_absolute
        ? *s_t_absolute
        : static_cast<std::size_t>(std::llround(*s_t_percent / 100.0 *
                                                static_cast<double>(population_size)));
    st = std::max<std::size_t>(1, st);
    return std::min(st, population_size);
}

/*----------------------------------------------------------------------------
 * Fitness evaluation
 *--------------------------------------------------------------------------*/

namespace {

std::int64_t now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

} // namespace

FitnessEvaluator::FitnessEvaluator(const Dataset &dataset, const Workload &workload,
                                   EvaluatorOptions opt)
    : dataset_(dataset), workload_(workload), opt_(std::move(opt)) {
    if (opt_.repetitions < 1) throw ContractViolation("fitness needs at least one repetition");

    /* Precompute the per-query answers from the sorted key array. */
    expected_.reserve(workload_.size());
    const auto &keys = dataset_.keys;
    for (const Query &q : workload_.queries) {
        std::uint64_t contribution = 0;
        auto lb = std::lower_bound(keys.begin(), keys.end(), q.lo);
        auto lb_rank = static_cast<std::uint64_t>(lb - keys.begin());
        if (q.is_point()) {
            if (lb != keys.end() and *lb == q.lo) contribution = lb_rank + 1;
        } else if (opt_.range_mode == RangeMode::LowerBoundOnly) {
            if (lb != keys.end() and *lb <= q.hi) contribution = lb_rank + 1;
        } else {
            auto ub = std::upper_bound(keys.begin(), keys.end(), q.hi);
            auto ub_rank = static_cast<std::uint64_t>(ub - keys.begin());
            std::uint64_t count = ub_rank - lb_rank;
            /* count plus the rank sum of the slice. */
            contribution = count;
            if (count > 0)
                contribution += (lb_rank + ub_rank - 1) * count / 2;
        }
        expected_.push_back(contribution);
        expected_total_ += contribution;
    }
}

const FitnessRecord *FitnessEvaluator::lookup(std::uint64_t hash) const {
    auto it = cache_.find(hash);
    return it == cache_.end() ? nullptr : &it->second;
}

const FitnessRecord &FitnessEvaluator::evaluate(const PhysicalIndex &index, std::uint64_t hash) {
    auto it = cache_.find(hash);
    if (it != cache_.end()) {
        ++hits_;
        return it->second;
    }
    FitnessRecord record = measure(index);
    ++measured_;
    return cache_.emplace(hash, std::move(record)).first->second;
}

double FitnessEvaluator::run_once(const PhysicalIndex &index, const std::vector<Query> &order,
                                  bool verify, double *cost_out, std::size_t passes) const {
    ExecStats stats;
    ExecStats *stats_ptr = nullptr;
    if (cost_out) {
        stats.weights = &opt_.weights;
        stats_ptr = &stats;
    }

    std::uint64_t checksum = 0;
    double tuple_cost = 0.0;
    auto start = std::chrono::steady_clock::now();
    for (std::size_t pass = 0; pass < passes; ++pass) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            const Query &q = order[i];
            std::uint64_t contribution = 0;
            if (q.is_point()) {
                auto hit = index.execute_point(q.lo, scratch_, stats_ptr);
                if (hit) contribution = *hit + 1;
                if (cost_out and hit) tuple_cost += opt_.weights.tuple;
            } else if (opt_.range_mode == RangeMode::LowerBoundOnly) {
                auto hit = index.execute_lower_bound(q.lo, q.hi, scratch_, stats_ptr);
                if (hit) contribution = hit->payload + 1;
                if (cost_out and hit) tuple_cost += opt_.weights.tuple;
            } else {
                range_buf_.clear();
                index.execute_range(q.lo, q.hi, scratch_, range_buf_, stats_ptr);
                contribution = range_buf_.size();
                for (const Entry &e : range_buf_) contribution += e.payload;
                if (cost_out)
                    tuple_cost += opt_.weights.tuple * static_cast<double>(range_buf_.size());
            }
            if (verify and contribution != expected_[i])
                throw CorrectnessViolation(
                    "index disagrees with the precomputed answer of query [" +
                        std::to_string(q.lo) + ", " + std::to_string(q.hi) + "]",
                    q.lo, q.hi);
            checksum += contribution;
        }
    }
    auto elapsed = std::chrono::steady_clock::now() - start;

    if (not verify and checksum != expected_total_ * passes) {
        /* Locate the offending query with a verification pass. */
        run_once(index, order, /*verify=*/true, nullptr);
        throw CorrectnessViolation("index produced a wrong checksum", 0, 0);
    }
    if (cost_out) *cost_out = stats.cost + tuple_cost;
    return static_cast<double>(
               std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count()) /
           static_cast<double>(passes);
}

FitnessRecord FitnessEvaluator::measure(const PhysicalIndex &index) {
    FitnessRecord record;
    record.workload_fingerprint = workload_.fingerprint();

    if (opt_.mode == FitnessMode::CostModel) {
        /* Deterministic: no warm-up, no shuffles, one pass. */
        double cost = 0.0;
        run_once(index, workload_.queries, /*verify=*/true, &cost);
        record.runs.assign(1, cost);
        record.median = cost;
        record.timestamp_ns = 0;
        return record;
    }

    std::vector<Query> order = workload_.queries;
    /* Untimed warm-up that also verifies every single query; its duration
     * decides how many passes a timed run needs to reach min_run_ns. */
    auto warm_start = std::chrono::steady_clock::now();
    run_once(index, order, /*verify=*/true, nullptr);
    auto warm_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                       std::chrono::steady_clock::now() - warm_start)
                       .count());
    std::size_t passes = 1;
    if (warm_ns > 0 and warm_ns < opt_.min_run_ns)
        passes = std::min<std::uint64_t>((opt_.min_run_ns + warm_ns - 1) / warm_ns, 256);

    record.runs.reserve(opt_.repetitions);
    for (std::size_t r = 0; r < opt_.repetitions; ++r) {
        std::mt19937_64 rng(derive_seed(opt_.seed, 0x50f1eULL + (shuffle_counter_++)));
        shuffle_stable(order, rng);
        record.runs.push_back(run_once(index, order, /*verify=*/false, nullptr, passes));
    }
    record.median = median_of(record.runs);
    record.timestamp_ns = now_ns();
    return record;
}

/*----------------------------------------------------------------------------
 * Population and tournament selection
 *--------------------------------------------------------------------------*/

double median_of(std::vector<double> values) {
    if (values.empty()) throw ContractViolation("median of an empty sample");
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

std::size_t Population::best() const {
    std::size_t b = 0;
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i].fitness < members[b].fitness or
            (members[i].fitness == members[b].fitness and members[i].seq < members[b].seq))
            b = i;
    return b;
}

TournamentResult tournament_selection(const Population &pop, std::size_t s_t, double q,
                                      std::mt19937_64 &rng) {
    if (pop.members.empty()) throw ContractViolation("tournament on an empty population");
    s_t = std::min(std::max<std::size_t>(s_t, 1), pop.members.size());

    /* Partial Fisher-Yates over the index vector: a uniform subset. */
    std::vector<std::size_t> idx(pop.members.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < s_t; ++i)
        std::swap(idx[i], idx[i + pick_index(rng, idx.size() - i)]);
    idx.resize(s_t);

    TournamentResult t;
    std::size_t best = idx[0];
    std::vector<double> fitnesses;
    fitnesses.reserve(s_t);
    for (std::size_t i : idx) {
        const PopulationMember &m = pop.members[i];
        fitnesses.push_back(m.fitness);
        t.sample_seqs.push_back(m.seq);
        const PopulationMember &b = pop.members[best];
        if (m.fitness < b.fitness or (m.fitness == b.fitness and m.seq < b.seq)) best = i;
    }
    t.best_index = best;

    if (q <= 0.0) {
        /* The 0% percentile always inserts. */
        t.threshold = std::numeric_limits<double>::infinity();
    } else {
        std::sort(fitnesses.begin(), fitnesses.end());
        double rank = std::ceil((1.0 - q / 100.0) * static_cast<double>(s_t));
        std::size_t at = rank < 1.0 ? 0 : static_cast<std::size_t>(rank) - 1;
        t.threshold = fitnesses[std::min(at, s_t - 1)];
    }
    return t;
}

namespace {

/** Position of the member to evict: the unfittest of the tournament sample,
 * or of the whole population when every sampled member is already gone. The
 * population's best individual is never evicted (admissions repeatedly
 * thinning the sample within one generation could otherwise leave it as the
 * sample's sole survivor and regress the population best). */
std::size_t eviction_victim(const Population &pop, const std::vector<std::uint64_t> &sample_seqs) {
    std::size_t best = pop.best();
    std::size_t victim = pop.members.size();
    auto worse = [&](std::size_t a, std::size_t b) {
        if (b >= pop.members.size()) return true;
        const PopulationMember &ma = pop.members[a], &mb = pop.members[b];
        return ma.fitness > mb.fitness or (ma.fitness == mb.fitness and ma.seq > mb.seq);
    };
    for (std::size_t i = 0; i < pop.members.size(); ++i) {
        if (i == best) continue;
        if (std::find(sample_seqs.begin(), sample_seqs.end(), pop.members[i].seq) ==
            sample_seqs.end())
            continue;
        if (worse(i, victim)) victim = i;
    }
    if (victim < pop.members.size()) return victim;
    for (std::size_t i = 0; i < pop.members.size(); ++i)
        if (i != best and worse(i, victim)) victim = i;
    return victim < pop.members.size() ? victim : best;
}

} // namespace

/*----------------------------------------------------------------------------
 * The search loop
 *--------------------------------------------------------------------------*/

SearchResult genetic_search(const GeneticParams &params, const Dataset &dataset,
                            const Workload &workload, const SearchOptions &options) {
    params.validate();

    EvaluatorOptions eopt;
    eopt.mode = options.mode;
    eopt.weights = options.weights;
    eopt.range_mode = options.range_mode;
    eopt.repetitions = params.c;
    eopt.seed = derive_seed(params.master_seed, 0xe7a1);
    FitnessEvaluator evaluator(dataset, workload, eopt);

    SearchResult result;
    Population pop;
    std::uint64_t seq = 0;

    auto admit = [&](PhysicalIndex idx, std::size_t generation) -> bool {
        std::uint64_t hash = structural_hash(idx);
        if (pop.contains(hash)) return false;
        double fitness = evaluator.evaluate(idx, hash).median;
        pop.members.push_back({std::move(idx), hash, fitness, seq++, generation});
        return true;
    };

    /* Initial population: s_init independently seeded randomized bulkloads.
     * Structural duplicates collapse into one member. */
    for (std::size_t i = 0; i < params.s_init; ++i) {
        std::mt19937_64 rng(derive_seed(params.master_seed, 0x1217 + i));
        admit(bulkload_btree_random(dataset, options.bulkload, rng, options.capacity), 0);
    }

    std::mt19937_64 loop_rng(derive_seed(params.master_seed, 0x100b));
    auto trace_row = [&](std::size_t gen, MutationKind kind, bool admitted) {
        TraceRow row{gen, pop.members[pop.best()].fitness, pop.members.size(), kind, admitted};
        if (options.on_trace) options.on_trace(row);
        if (options.keep_trace) result.trace.push_back(row);
    };

    std::size_t generations = 0;
    for (std::size_t g = 0; g < params.g_max; ++g) {
        TournamentResult t = tournament_selection(
            pop, params.tournament_size(pop.members.size()), params.q, loop_rng);
        /* Every mutation of this generation starts from the tournament
         * winner; admissions must not move it, so take a copy. */
        PhysicalIndex winner = pop.members[t.best_index].index;

        for (std::size_t j = 0; j < params.s_max; ++j) {
            MutationKind kind = draw_mutation(options.dists, loop_rng);
            auto node = draw_node(winner, kind, options.dists, loop_rng);
            if (not node) {
                ++result.aborted_mutations;
                trace_row(g, kind, false);
                continue;
            }
            auto choice = draw_phys(options.dists, kind, winner, *node, loop_rng);
            if (not choice) {
                ++result.aborted_mutations;
                trace_row(g, kind, false);
                continue;
            }
            auto mutant = apply_mutation(winner, kind, *node, *choice, loop_rng, options.dists);
            if (not mutant) {
                ++result.aborted_mutations;
                trace_row(g, kind, false);
                continue;
            }
            std::uint64_t hash = structural_hash(*mutant);
            if (pop.contains(hash)) {
                ++result.duplicate_mutations;
                trace_row(g, kind, false);
                continue;
            }
            double fitness = evaluator.evaluate(*mutant, hash).median;
            bool admitted = fitness <= t.threshold;
            if (admitted and pop.members.size() >= params.s_pi) {
                std::size_t victim = eviction_victim(pop, t.sample_seqs);
                if (victim == pop.best() and fitness > pop.members[victim].fitness)
                    admitted = false; // never trade the sole best for a worse mutant
                else
                    pop.members.erase(pop.members.begin() +
                                      static_cast<std::ptrdiff_t>(victim));
            }
            if (admitted)
                pop.members.push_back({std::move(*mutant), hash, fitness, seq++, g + 1});
            trace_row(g, kind, admitted);
        }
        generations = g + 1;

        if (options.on_generation) {
            const PopulationMember &best = pop.members[pop.best()];
            GenerationStats stats{g, best.fitness, best.hash, &best.index, pop.members.size()};
            if (not options.on_generation(stats)) break;
        }
    }

    const PopulationMember &best = pop.members[pop.best()];
    result.best_config = to_config(best.index);
    result.best_config.meta.dataset_name = dataset.name;
    result.best_config.meta.dataset_fingerprint = dataset.fingerprint();
    result.best_config.meta.origin_size = dataset.size();
    result.best_config.meta.found_generation = best.generation;
    result.best_config.meta.found_fitness = best.fitness;
    result.best_fitness = best.fitness;
    result.best_hash = best.hash;
    result.best_shape = best.index.shape();
    result.generations_run = generations;
    result.measured_evaluations = evaluator.measured_evaluations();
    result.cache_hits = evaluator.cache_hits();
    return result;
}

} // namespace genidx
