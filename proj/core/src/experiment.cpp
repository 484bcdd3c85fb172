#include "genidx/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "genidx/rng.hpp"

namespace genidx {

using nlohmann::json;

/*----------------------------------------------------------------------------
 * Spec realization
 *--------------------------------------------------------------------------*/

Dataset DatasetSpec::realize(std::size_t size_override) const {
    std::size_t size = size_override == 0 ? n : size_override;
    switch (kind) {
        case Kind::UniDense: return gen_uni_dense(size);
        case Kind::Skewed: return gen_skewed(size, seed);
        case Kind::File:
            if (size == 0) return load_dataset(path);
            return load_and_sample(path, size, seed);
    }
    throw ConfigError("unknown dataset kind");
}

Workload WorkloadSpec::realize(const Dataset &ds) const {
    std::size_t hi = idx_max == 0 ? ds.size() : idx_max;
    switch (kind) {
        case Kind::Point:
            return gen_point_workload(ds, idx_min, hi, count, seed);
        case Kind::PointNormal:
            return gen_point_normal_workload(ds, mean_idx, stddev_idx, count, seed);
        case Kind::Range:
            return gen_range_workload(ds, sel, idx_min, hi, count, seed);
        case Kind::Mix8020:
            return gen_mix_workload(ds, {PointSpec{}}, {RangeSpec{sel, 0, 0}},
                                    {0.8, 0.2}, count, seed);
        case Kind::Mix:
            return gen_mix_workload(ds, points, ranges, proportions, count, seed);
        case Kind::ThreePartitionMix:
            return gen_three_partition_mix(ds, sel, count, seed);
    }
    throw ConfigError("unknown workload kind");
}

PhysicalIndex BaselineSpec::build(const Dataset &ds, std::size_t capacity) const {
    switch (kind) {
        case Kind::SingleHash:
            return build_single_node(ds, DataLayout::Hash, SearchMethod::HashS,
                                     std::max(capacity, ds.size()));
        case Kind::Btree: {
            BulkloadSpec spec = btree;
            spec.fixed = BulkloadSpec::Fixed{DataLayout::SortedCol, SearchMethod::BinS};
            std::mt19937_64 rng(1); // unused under fixed choices
            return bulkload_btree_random(ds, spec, rng, capacity);
        }
        case Kind::HandSpec:
            return build_three_partition_handspec(ds, capacity);
        case Kind::ConfigFile:
            return build_from_config(IndexConfig::load(path), ds);
    }
    throw ConfigError("unknown baseline kind");
}

std::string BaselineSpec::describe() const {
    switch (kind) {
        case Kind::SingleHash: return "single_hash";
        case Kind::Btree: return "btree";
        case Kind::HandSpec: return "hand_spec";
        case Kind::ConfigFile: return "config:" + path;
    }
    return "?";
}

/*----------------------------------------------------------------------------
 * Config JSON
 *--------------------------------------------------------------------------*/

namespace {

DatasetSpec dataset_from_json(const json &j) {
    DatasetSpec d;
    std::string kind = j.value("kind", "uni_dense");
    if (kind == "uni_dense") d.kind = DatasetSpec::Kind::UniDense;
    else if (kind == "skewed") d.kind = DatasetSpec::Kind::Skewed;
    else if (kind == "file") d.kind = DatasetSpec::Kind::File;
    else throw ConfigError("unknown dataset kind: " + kind);
    d.n = j.value("n", std::size_t{100000});
    d.seed = j.value("seed", std::uint64_t{1});
    d.path = j.value("path", std::string{});
    if (d.kind == DatasetSpec::Kind::File and d.path.empty())
        throw ConfigError("file dataset needs a path");
    return d;
}

json dataset_to_json(const DatasetSpec &d) {
    json j;
    switch (d.kind) {
        case DatasetSpec::Kind::UniDense: j["kind"] = "uni_dense"; break;
        case DatasetSpec::Kind::Skewed: j["kind"] = "skewed"; break;
        case DatasetSpec::Kind::File: j["kind"] = "file"; break;
    }
    j["n"] = d.n;
    j["seed"] = d.seed;
    if (not d.path.empty()) j["path"] = d.path;
    return j;
}

WorkloadSpec workload_from_json(const json &j) {
    WorkloadSpec w;
    std::string kind = j.value("kind", "point");
    if (kind == "point") w.kind = WorkloadSpec::Kind::Point;
    else if (kind == "point_normal") w.kind = WorkloadSpec::Kind::PointNormal;
    else if (kind == "range") w.kind = WorkloadSpec::Kind::Range;
    else if (kind == "mix_80_20") w.kind = WorkloadSpec::Kind::Mix8020;
    else if (kind == "mix") w.kind = WorkloadSpec::Kind::Mix;
    else if (kind == "three_partition_mix") w.kind = WorkloadSpec::Kind::ThreePartitionMix;
    else throw ConfigError("unknown workload kind: " + kind);
    w.count = j.value("count", std::size_t{10000});
    w.seed = j.value("seed", std::uint64_t{7});
    w.idx_min = j.value("idx_min", std::size_t{0});
    w.idx_max = j.value("idx_max", std::size_t{0});
    w.sel = j.value("sel", 0.001);
    w.mean_idx = j.value("mean_idx", 0.0);
    w.stddev_idx = j.value("stddev_idx", 0.0);
    if (j.contains("points"))
        for (const json &p : j.at("points"))
            w.points.push_back({p.value("idx_min", std::size_t{0}),
                                p.value("idx_max", std::size_t{0})});
    if (j.contains("ranges"))
        for (const json &r : j.at("ranges"))
            w.ranges.push_back({r.value("sel", 0.001), r.value("idx_min", std::size_t{0}),
                                r.value("idx_max", std::size_t{0})});
    if (j.contains("proportions"))
        w.proportions = j.at("proportions").get<std::vector<double>>();
    return w;
}

json workload_to_json(const WorkloadSpec &w) {
    json j;
    switch (w.kind) {
        case WorkloadSpec::Kind::Point: j["kind"] = "point"; break;
        case WorkloadSpec::Kind::PointNormal: j["kind"] = "point_normal"; break;
        case WorkloadSpec::Kind::Range: j["kind"] = "range"; break;
        case WorkloadSpec::Kind::Mix8020: j["kind"] = "mix_80_20"; break;
        case WorkloadSpec::Kind::Mix: j["kind"] = "mix"; break;
        case WorkloadSpec::Kind::ThreePartitionMix: j["kind"] = "three_partition_mix"; break;
    }
    j["count"] = w.count;
    j["seed"] = w.seed;
    if (w.idx_min != 0) j["idx_min"] = w.idx_min;
    if (w.idx_max != 0) j["idx_max"] = w.idx_max;
    j["sel"] = w.sel;
    if (w.kind == WorkloadSpec::Kind::PointNormal) {
        j["mean_idx"] = w.mean_idx;
        j["stddev_idx"] = w.stddev_idx;
    }
    if (not w.points.empty()) {
        json pts = json::array();
        for (const PointSpec &p : w.points)
            pts.push_back(json{{"idx_min", p.idx_min}, {"idx_max", p.idx_max}});
        j["points"] = pts;
    }
    if (not w.ranges.empty()) {
        json rs = json::array();
        for (const RangeSpec &r : w.ranges)
            rs.push_back(json{{"sel", r.sel}, {"idx_min", r.idx_min}, {"idx_max", r.idx_max}});
        j["ranges"] = rs;
    }
    if (not w.proportions.empty()) j["proportions"] = w.proportions;
    return j;
}

GeneticParams genetic_from_json(const json &j) {
    GeneticParams p;
    p.g_max = j.value("g_max", p.g_max);
    p.s_init = j.value("s_init", p.s_init);
    p.s_max = j.value("s_max", p.s_max);
    p.s_pi = j.value("s_pi", p.s_pi);
    if (j.contains("s_t_percent")) {
        p.s_t_percent = j.at("s_t_percent").get<double>();
        p.s_t_absolute.reset();
    } else if (j.contains("s_t")) {
        p.s_t_absolute = j.at("s_t").get<std::size_t>();
    }
    p.q = j.value("q", p.q);
    p.c = j.value("c", p.c);
    p.master_seed = j.value("master_seed", p.master_seed);
    return p;
}

json genetic_to_json(const GeneticParams &p) {
    json j;
    j["g_max"] = p.g_max;
    j["s_init"] = p.s_init;
    j["s_max"] = p.s_max;
    j["s_pi"] = p.s_pi;
    if (p.s_t_absolute) j["s_t"] = *p.s_t_absolute;
    if (p.s_t_percent) j["s_t_percent"] = *p.s_t_percent;
    j["q"] = p.q;
    j["c"] = p.c;
    j["master_seed"] = p.master_seed;
    return j;
}

MutationDistributions dists_from_json(const json &j) {
    MutationDistributions d;
    if (j.contains("mutations")) {
        for (MutationKind k : all_mutation_kinds) {
            std::string name(to_string(k));
            if (j.at("mutations").contains(name))
                d.kind_weights[static_cast<std::size_t>(k)] = j.at("mutations").at(name).get<double>();
        }
    }
    if (j.contains("layouts")) {
        for (DataLayout l : all_layouts) {
            std::string name(to_string(l));
            if (j.at("layouts").contains(name))
                d.layout_weights[static_cast<std::size_t>(l)] = j.at("layouts").at(name).get<double>();
        }
    }
    if (j.contains("searches")) {
        for (SearchMethod s : all_search_methods) {
            std::string name(to_string(s));
            if (j.at("searches").contains(name))
                d.search_weights[static_cast<std::size_t>(s)] = j.at("searches").at(name).get<double>();
        }
    }
    return d;
}

BaselineSpec baseline_from_json(const json &j) {
    BaselineSpec b;
    std::string kind = j.value("kind", "single_hash");
    if (kind == "single_hash") b.kind = BaselineSpec::Kind::SingleHash;
    else if (kind == "btree") b.kind = BaselineSpec::Kind::Btree;
    else if (kind == "hand_spec") b.kind = BaselineSpec::Kind::HandSpec;
    else if (kind == "config") b.kind = BaselineSpec::Kind::ConfigFile;
    else throw ConfigError("unknown baseline kind: " + kind);
    b.btree.leaf_count = j.value("leaf_count", std::size_t{100});
    b.btree.leaf_fill = j.value("leaf_fill", std::size_t{1000});
    b.btree.fanout = j.value("fanout", std::size_t{10});
    b.path = j.value("path", std::string{});
    if (b.kind == BaselineSpec::Kind::ConfigFile and b.path.empty())
        throw ConfigError("config baseline needs a path");
    return b;
}

BulkloadSpec bulkload_from_json(const json &j) {
    BulkloadSpec s;
    s.leaf_count = j.value("leaf_count", s.leaf_count);
    s.leaf_fill = j.value("leaf_fill", s.leaf_fill);
    s.fanout = j.value("fanout", s.fanout);
    if (j.value("fixed", false))
        s.fixed = BulkloadSpec::Fixed{DataLayout::SortedCol, SearchMethod::BinS};
    return s;
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (j.value("format", std::string{}) != "genidx.experiment")
            throw ConfigError("not an experiment config document");
        if (j.value("version", 0) != version)
            throw ConfigError("unsupported experiment config version");
        ExperimentConfig cfg;
        cfg.name = j.value("name", cfg.name);
        if (j.contains("dataset")) cfg.dataset = dataset_from_json(j.at("dataset"));
        if (j.contains("workload")) cfg.workload = workload_from_json(j.at("workload"));
        if (j.contains("genetic")) cfg.genetic = genetic_from_json(j.at("genetic"));
        if (j.contains("distributions")) cfg.dists = dists_from_json(j.at("distributions"));
        if (j.contains("baseline")) cfg.baseline = baseline_from_json(j.at("baseline"));
        if (j.contains("fitness")) {
            const json &f = j.at("fitness");
            std::string mode = f.value("mode", "measured");
            if (mode == "measured") cfg.mode = FitnessMode::Measured;
            else if (mode == "cost_model") cfg.mode = FitnessMode::CostModel;
            else throw ConfigError("unknown fitness mode: " + mode);
            std::string rm = f.value("range_mode", "materialize");
            if (rm == "materialize") cfg.range_mode = RangeMode::Materialize;
            else if (rm == "lower_bound") cfg.range_mode = RangeMode::LowerBoundOnly;
            else throw ConfigError("unknown range mode: " + rm);
            if (f.contains("cost_weights")) {
                const json &w = f.at("cost_weights");
                cfg.weights.node_visit = w.value("node_visit", cfg.weights.node_visit);
                cfg.weights.comparison = w.value("comparison", cfg.weights.comparison);
                cfg.weights.hash_probe = w.value("hash_probe", cfg.weights.hash_probe);
                cfg.weights.tuple = w.value("tuple", cfg.weights.tuple);
            }
        }
        if (j.contains("bulkload")) cfg.bulkload = bulkload_from_json(j.at("bulkload"));
        cfg.capacity = j.value("capacity", cfg.capacity);
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
        if (j.contains("upscale_sizes"))
            cfg.upscale_sizes = j.at("upscale_sizes").get<std::vector<std::size_t>>();
        if (j.contains("stop")) {
            const json &s = j.at("stop");
            if (s.contains("baseline_ratio"))
                cfg.stop.baseline_ratio = s.at("baseline_ratio").get<double>();
            std::string shape = s.value("shape", "any");
            if (shape == "any") cfg.stop.shape = StopRule::Shape::Any;
            else if (shape == "single_hash") cfg.stop.shape = StopRule::Shape::SingleHash;
            else if (shape == "sorted_col_max3") cfg.stop.shape = StopRule::Shape::SortedColMax3;
            else throw ConfigError("unknown stop shape: " + shape);
        }
        return cfg;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
}

ExperimentConfig ExperimentConfig::load(const std::string &path) {
    std::ifstream in(path);
    if (not in) throw ConfigError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

std::string ExperimentConfig::to_json(int indent) const {
    json j;
    j["format"] = "genidx.experiment";
    j["version"] = version;
    j["name"] = name;
    j["dataset"] = dataset_to_json(dataset);
    j["workload"] = workload_to_json(workload);
    j["genetic"] = genetic_to_json(genetic);
    j["capacity"] = capacity;
    j["output_dir"] = output_dir;
    if (not upscale_sizes.empty()) j["upscale_sizes"] = upscale_sizes;
    return j.dump(indent);
}

std::filesystem::path ExperimentConfig::resolved_output_dir() const {
    if (const char *env = std::getenv("GENIDX_OUT_DIR"))
        return std::filesystem::path(env);
    return std::filesystem::path(output_dir);
}

/*----------------------------------------------------------------------------
 * Experiment runs
 *--------------------------------------------------------------------------*/

namespace {

FitnessRecord evaluate_index(const Dataset &ds, const Workload &wl, const PhysicalIndex &index,
                             const ExperimentConfig &cfg) {
    EvaluatorOptions opt;
    opt.mode = cfg.mode;
    opt.weights = cfg.weights;
    opt.range_mode = cfg.range_mode;
    opt.repetitions = cfg.genetic.c;
    opt.seed = derive_seed(cfg.genetic.master_seed, 0xba5e);
    FitnessEvaluator eval(ds, wl, opt);
    return eval.evaluate(index, structural_hash(index));
}

json fitness_to_json(const FitnessRecord &r) {
    return json{{"median", r.median},
                {"runs", r.runs},
                {"workload_fingerprint", r.workload_fingerprint}};
}

bool shape_satisfied(StopRule::Shape rule, const IndexShape &shape) {
    switch (rule) {
        case StopRule::Shape::Any: return true;
        case StopRule::Shape::SingleHash: return shape.single_hash_node();
        case StopRule::Shape::SortedColMax3: return shape.nodes <= 3 and shape.sorted_col_only();
    }
    return true;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig &config) {
    config.genetic.validate();
    std::filesystem::path out_dir = config.resolved_output_dir();
    std::filesystem::create_directories(out_dir);

    Dataset ds = config.dataset.realize();
    Workload wl = config.workload.realize(ds);

    PhysicalIndex baseline = config.baseline.build(ds, config.capacity);
    FitnessRecord baseline_fitness = evaluate_index(ds, wl, baseline, config);

    ExperimentResult result;
    result.baseline_fitness = baseline_fitness.median;
    result.trace_path = out_dir / "trace.csv";
    result.best_config_path = out_dir / "best_config.json";
    result.baseline_path = out_dir / "baseline.json";
    result.summary_path = out_dir / "summary.json";

    std::ofstream trace(result.trace_path);
    if (not trace) throw ConfigError("cannot write " + result.trace_path.string());
    trace << "# genidx.trace.v1\n";
    trace << "generation,best_fitness_ns,population_size,mutation_kind_applied,admitted_flag\n";

    SearchOptions opt;
    opt.mode = config.mode;
    opt.weights = config.weights;
    opt.range_mode = config.range_mode;
    opt.bulkload = config.bulkload.value_or(BulkloadSpec::sized_for(ds.size()));
    opt.capacity = config.capacity;
    opt.dists = config.dists;
    opt.keep_trace = false;
    opt.on_trace = [&](const TraceRow &row) {
        trace << row.generation << ',' << row.best_fitness << ',' << row.population_size << ','
              << to_string(row.kind) << ',' << (row.admitted ? 1 : 0) << '\n';
    };
    if (config.stop.baseline_ratio or config.stop.shape != StopRule::Shape::Any) {
        double bar = config.stop.baseline_ratio.value_or(1.0) * baseline_fitness.median;
        StopRule::Shape shape_rule = config.stop.shape;
        opt.on_generation = [bar, shape_rule](const GenerationStats &stats) {
            if (stats.best_fitness > bar) return true;
            return not shape_satisfied(shape_rule, stats.best->shape());
        };
    }

    SearchResult search = genetic_search(config.genetic, ds, wl, opt);
    trace.close();

    search.best_config.save(result.best_config_path.string());

    {
        std::ofstream out(result.baseline_path);
        json j;
        j["baseline"] = config.baseline.describe();
        j["fitness"] = fitness_to_json(baseline_fitness);
        out << j.dump(2) << '\n';
    }

    result.best_fitness = search.best_fitness;
    result.ratio = search.best_fitness / baseline_fitness.median;
    result.best_shape = search.best_shape;
    result.generations_run = search.generations_run;
    result.best_hash = search.best_hash;

    {
        std::ofstream out(result.summary_path);
        json j;
        j["name"] = config.name;
        j["dataset"] = ds.name;
        j["workload"] = wl.name;
        j["queries"] = wl.size();
        j["mode"] = config.mode == FitnessMode::Measured ? "measured" : "cost_model";
        j["baseline"] = config.baseline.describe();
        j["baseline_fitness"] = baseline_fitness.median;
        j["best_fitness"] = search.best_fitness;
        j["ratio_to_baseline"] = result.ratio;
        j["generations_run"] = search.generations_run;
        j["measured_evaluations"] = search.measured_evaluations;
        j["cache_hits"] = search.cache_hits;
        j["aborted_mutations"] = search.aborted_mutations;
        j["duplicate_mutations"] = search.duplicate_mutations;
        j["best_nodes"] = search.best_shape.nodes;
        j["best_depth"] = search.best_shape.depth;
        j["best_hash"] = search.best_hash;
        out << j.dump(2) << '\n';
    }
    return result;
}

std::vector<UpscaleRow> run_upscale(const ExperimentConfig &config,
                                    const IndexConfig &best_config,
                                    const std::vector<std::size_t> &sizes) {
    std::filesystem::path out_dir = config.resolved_output_dir();
    std::filesystem::create_directories(out_dir);

    /* The initial population at the origin size decides the comparison
     * config: its fittest member (same seeds as the search run). */
    Dataset origin = config.dataset.realize();
    Workload origin_wl = config.workload.realize(origin);
    BulkloadSpec bulkload = config.bulkload.value_or(BulkloadSpec::sized_for(origin.size()));

    EvaluatorOptions eopt;
    eopt.mode = config.mode;
    eopt.weights = config.weights;
    eopt.range_mode = config.range_mode;
    eopt.repetitions = config.genetic.c;
    eopt.seed = derive_seed(config.genetic.master_seed, 0xba5e);
    FitnessEvaluator origin_eval(origin, origin_wl, eopt);

    std::optional<IndexConfig> initial_best;
    double initial_best_fitness = 0.0;
    for (std::size_t i = 0; i < config.genetic.s_init; ++i) {
        std::mt19937_64 rng(derive_seed(config.genetic.master_seed, 0x1217 + i));
        PhysicalIndex idx = bulkload_btree_random(origin, bulkload, rng, config.capacity);
        double f = origin_eval.evaluate(idx, structural_hash(idx)).median;
        if (not initial_best or f < initial_best_fitness) {
            initial_best = to_config(idx);
            initial_best->meta.origin_size = origin.size();
            initial_best_fitness = f;
        }
    }

    std::vector<UpscaleRow> rows;
    for (std::size_t size : sizes) {
        Dataset ds = config.dataset.realize(size);
        Workload wl = config.workload.realize(ds);

        PhysicalIndex found = build_from_config(best_config, ds);
        PhysicalIndex initial = build_from_config(*initial_best, ds);

        UpscaleRow row;
        row.size = size;
        CorrectnessOptions copt;
        copt.exhaustive = ds.size() <= 1000;
        ExecScratch scratch;
        row.correct = not find_range_violation(ds.entries(),
            [&](key_type l, key_type h, std::vector<Entry> &out) {
                found.execute_range(l, h, scratch, out);
            }, copt).has_value();

        row.fitness = evaluate_index(ds, wl, found, config).median;
        row.initial_best_fitness = evaluate_index(ds, wl, initial, config).median;
        row.improvement = row.initial_best_fitness / row.fitness;
        rows.push_back(row);
    }

    std::ofstream out(out_dir / "upscale.csv");
    out << "# genidx.upscale.v1\n";
    out << "size,fitness_ns,initial_best_ns,improvement,correct\n";
    for (const UpscaleRow &r : rows)
        out << r.size << ',' << r.fitness << ',' << r.initial_best_fitness << ','
            << r.improvement << ',' << (r.correct ? 1 : 0) << '\n';
    return rows;
}

std::vector<PocRow> run_poc_benchmark(const ExperimentConfig &config,
                                      const std::vector<PocContender> &contenders,
                                      std::size_t runs) {
    std::filesystem::path out_dir = config.resolved_output_dir();
    std::filesystem::create_directories(out_dir);

    Dataset ds = config.dataset.realize();
    Workload wl = config.workload.realize(ds);

    EvaluatorOptions eopt;
    eopt.mode = FitnessMode::Measured;
    eopt.range_mode = RangeMode::LowerBoundOnly; // ranges reduce to lower-bound lookups
    eopt.repetitions = runs;
    eopt.seed = derive_seed(config.genetic.master_seed, 0x90c);

    std::vector<PocRow> rows;
    for (const PocContender &contender : contenders) {
        PhysicalIndex index = [&] {
            switch (contender.kind) {
                case PocContender::Kind::HandSpec:
                    return build_three_partition_handspec(ds, config.capacity);
                case PocContender::Kind::Btree: {
                    BaselineSpec b;
                    b.kind = BaselineSpec::Kind::Btree;
                    b.btree = BulkloadSpec::sized_for(ds.size());
                    return b.build(ds, config.capacity);
                }
                case PocContender::Kind::SingleHash: {
                    BaselineSpec b;
                    return b.build(ds, config.capacity);
                }
                case PocContender::Kind::ConfigFile:
                    return build_from_config(IndexConfig::load(contender.path), ds);
            }
            throw ConfigError("unknown contender kind");
        }();

        FitnessEvaluator eval(ds, wl, eopt);
        const FitnessRecord &record = eval.evaluate(index, structural_hash(index));

        PocRow row;
        row.name = contender.name;
        row.run_totals_ns = record.runs;
        double mean_total = 0.0;
        for (double r : record.runs) mean_total += r;
        mean_total /= static_cast<double>(record.runs.size());
        row.mean_ns_per_query = mean_total / static_cast<double>(wl.size());
        double var = 0.0;
        for (double r : record.runs) {
            double per_query = r / static_cast<double>(wl.size());
            var += (per_query - row.mean_ns_per_query) * (per_query - row.mean_ns_per_query);
        }
        row.stddev_ns = record.runs.size() > 1
            ? std::sqrt(var / static_cast<double>(record.runs.size() - 1))
            : 0.0;
        rows.push_back(std::move(row));
    }

    std::ofstream out(out_dir / "poc.csv");
    out << "# genidx.poc.v1\n";
    out << "contender,mean_ns_per_query,stddev_ns,queries,runs\n";
    for (const PocRow &r : rows)
        out << r.name << ',' << r.mean_ns_per_query << ',' << r.stddev_ns << ','
            << wl.size() << ',' << r.run_totals_ns.size() << '\n';
    return rows;
}

} // namespace genidx
