#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "genidx/experiment.hpp"
#include "genidx/rng.hpp"

using namespace genidx;

namespace {

int cmd_gen_data(const std::string &kind, std::size_t n, std::uint64_t seed,
                 const std::string &from, const std::string &out) {
    Dataset ds;
    if (not from.empty()) {
        ds = n == 0 ? load_dataset(from) : load_and_sample(from, n, seed);
    } else if (kind == "uni_dense") {
        ds = gen_uni_dense(n);
    } else if (kind == "skewed") {
        ds = gen_skewed(n, seed);
    } else {
        std::cerr << "genidx: unknown dataset kind '" << kind << "'\n";
        return 2;
    }
    save_dataset(ds, out);
    std::cout << "wrote " << ds.size() << " keys (" << ds.name << ") to " << out
              << " fingerprint " << ds.fingerprint() << "\n";
    return 0;
}

Dataset dataset_from_flags(const std::string &file, std::size_t uni_dense_n,
                           std::size_t skewed_n, std::uint64_t seed, std::size_t sample_n) {
    if (not file.empty())
        return sample_n == 0 ? load_dataset(file) : load_and_sample(file, sample_n, seed);
    if (uni_dense_n > 0) return gen_uni_dense(uni_dense_n);
    if (skewed_n > 0) return gen_skewed(skewed_n, seed);
    throw ConfigError("no dataset given: use --dataset, --uni-dense or --skewed");
}

int cmd_gen_workload(const Dataset &ds, const std::string &kind, std::size_t count,
                     std::uint64_t seed, double sel, double mean_idx, double stddev_idx,
                     const std::string &out) {
    WorkloadSpec spec;
    if (kind == "point") spec.kind = WorkloadSpec::Kind::Point;
    else if (kind == "point_normal") spec.kind = WorkloadSpec::Kind::PointNormal;
    else if (kind == "range") spec.kind = WorkloadSpec::Kind::Range;
    else if (kind == "mix_80_20") spec.kind = WorkloadSpec::Kind::Mix8020;
    else if (kind == "three_partition_mix") spec.kind = WorkloadSpec::Kind::ThreePartitionMix;
    else {
        std::cerr << "genidx: unknown workload kind '" << kind << "'\n";
        return 2;
    }
    spec.count = count;
    spec.seed = seed;
    spec.sel = sel;
    spec.mean_idx = mean_idx;
    spec.stddev_idx = stddev_idx;
    Workload wl = spec.realize(ds);
    save_workload_csv(wl, out);
    std::cout << "wrote " << wl.size() << " queries (" << wl.name << ") to " << out
              << " fingerprint " << wl.fingerprint() << "\n";
    return 0;
}

ExperimentConfig load_config(const std::string &path) {
    return ExperimentConfig::load(path);
}

void apply_overrides(ExperimentConfig &cfg, const std::string &mode, const std::string &out_dir,
                     std::uint64_t seed, std::size_t g_max) {
    /* Flags win over the config file; the config file wins over defaults. */
    if (mode == "measured") cfg.mode = FitnessMode::Measured;
    else if (mode == "cost_model") cfg.mode = FitnessMode::CostModel;
    else if (not mode.empty()) throw ConfigError("unknown fitness mode: " + mode);
    if (not out_dir.empty()) cfg.output_dir = out_dir;
    if (seed != 0) cfg.genetic.master_seed = seed;
    if (g_max != 0) cfg.genetic.g_max = g_max;
}

int cmd_search(const ExperimentConfig &cfg) {
    ExperimentResult result = run_experiment(cfg);
    std::cout << "baseline (" << cfg.baseline.describe() << "): " << result.baseline_fitness
              << "\nbest:     " << result.best_fitness << "  (ratio "
              << result.ratio << ")\n"
              << "structure: " << result.best_shape.nodes << " nodes, depth "
              << result.best_shape.depth << "\n"
              << "generations run: " << result.generations_run << "\n"
              << "artifacts: " << result.trace_path << ", " << result.best_config_path << ", "
              << result.baseline_path << ", " << result.summary_path << "\n";
    return 0;
}

int cmd_upscale(const ExperimentConfig &cfg, const std::string &best_path,
                std::vector<std::size_t> sizes) {
    if (sizes.empty()) sizes = cfg.upscale_sizes;
    if (sizes.empty()) throw ConfigError("no upscale sizes given");
    IndexConfig best = IndexConfig::load(best_path);
    auto rows = run_upscale(cfg, best, sizes);
    for (const UpscaleRow &row : rows)
        std::cout << row.size << ": fitness " << row.fitness << ", initial best "
                  << row.initial_best_fitness << ", improvement x" << row.improvement
                  << (row.correct ? "" : "  [CORRECTNESS FAILED]") << "\n";
    std::cout << "wrote " << (cfg.resolved_output_dir() / "upscale.csv") << "\n";
    return 0;
}

int cmd_poc(const ExperimentConfig &cfg, const std::vector<std::string> &contender_args,
            std::size_t runs) {
    std::vector<PocContender> contenders;
    for (const std::string &arg : contender_args) {
        PocContender c;
        if (arg == "hand_spec") c = {PocContender::Kind::HandSpec, arg, ""};
        else if (arg == "btree") c = {PocContender::Kind::Btree, arg, ""};
        else if (arg == "single_hash") c = {PocContender::Kind::SingleHash, arg, ""};
        else c = {PocContender::Kind::ConfigFile, std::filesystem::path(arg).stem().string(), arg};
        contenders.push_back(std::move(c));
    }
    if (contenders.empty())
        contenders = {{PocContender::Kind::HandSpec, "hand_spec", ""},
                      {PocContender::Kind::Btree, "btree", ""}};
    auto rows = run_poc_benchmark(cfg, contenders, runs);
    for (const PocRow &row : rows)
        std::cout << row.name << ": " << row.mean_ns_per_query << " ns/query (stddev "
                  << row.stddev_ns << ")\n";
    std::cout << "wrote " << (cfg.resolved_output_dir() / "poc.csv") << "\n";
    return 0;
}

int cmd_verify(const std::string &config_path, const Dataset &ds, bool exhaustive,
               std::size_t pairs) {
    IndexConfig cfg = IndexConfig::load(config_path);
    PhysicalIndex index = build_from_config(cfg, ds);
    if (auto problem = index.validate()) {
        std::cout << "INVALID: " << *problem << "\n";
        return 1;
    }
    CorrectnessOptions opt;
    opt.exhaustive = exhaustive;
    opt.sample_pairs = pairs;
    ExecScratch scratch;
    auto violation = find_range_violation(ds.entries(),
        [&](key_type l, key_type h, std::vector<Entry> &out) {
            index.execute_range(l, h, scratch, out);
        }, opt);
    if (violation) {
        std::cout << "INCORRECT: range [" << violation->l << ", " << violation->h
                  << "] disagrees with the brute-force filter\n";
        return 1;
    }
    std::cout << "OK: " << index.node_count() << " nodes over " << ds.size() << " keys ("
              << (exhaustive ? "exhaustive grid" : std::to_string(pairs) + " sampled pairs")
              << ")\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"genidx: generic index framework and genetic structure search"};
    app.require_subcommand(1);

    /* gen-data */
    auto *gen_data = app.add_subcommand("gen-data", "generate or sample a binary key dataset");
    std::string gd_kind = "uni_dense", gd_from, gd_out = "data.bin";
    std::size_t gd_n = 100000;
    std::uint64_t gd_seed = 1;
    gen_data->add_option("--kind", gd_kind, "uni_dense or skewed");
    gen_data->add_option("--n", gd_n, "number of keys (0 with --from loads the whole file)");
    gen_data->add_option("--seed", gd_seed, "sampling/generation seed");
    gen_data->add_option("--from", gd_from, "sample from an existing dataset file");
    gen_data->add_option("--out", gd_out, "output file")->required();

    /* shared dataset flags */
    auto add_dataset_flags = [](CLI::App *cmd, std::string &file, std::size_t &uni,
                                std::size_t &skew, std::uint64_t &seed, std::size_t &sample) {
        cmd->add_option("--dataset", file, "binary dataset file");
        cmd->add_option("--sample", sample, "sample the file down to this many keys");
        cmd->add_option("--uni-dense", uni, "generate a dense uniform dataset of this size");
        cmd->add_option("--skewed", skew, "generate a skewed dataset of this size");
        cmd->add_option("--data-seed", seed, "dataset generation/sampling seed");
    };

    /* gen-workload */
    auto *gen_wl = app.add_subcommand("gen-workload", "generate a query workload CSV");
    std::string gw_file, gw_kind = "point", gw_out = "workload.csv";
    std::size_t gw_uni = 0, gw_skew = 0, gw_sample = 0, gw_count = 10000;
    std::uint64_t gw_dseed = 1, gw_seed = 7;
    double gw_sel = 0.001, gw_mean = 0.0, gw_stddev = 0.0;
    add_dataset_flags(gen_wl, gw_file, gw_uni, gw_skew, gw_dseed, gw_sample);
    gen_wl->add_option("--kind", gw_kind,
                       "point, point_normal, range, mix_80_20 or three_partition_mix");
    gen_wl->add_option("--count", gw_count, "number of queries");
    gen_wl->add_option("--seed", gw_seed, "workload seed");
    gen_wl->add_option("--sel", gw_sel, "range selectivity");
    gen_wl->add_option("--mean-idx", gw_mean, "normal mean (index units)");
    gen_wl->add_option("--stddev-idx", gw_stddev, "normal deviation (index units)");
    gen_wl->add_option("--out", gw_out, "output CSV")->required();

    /* search / upscale / poc share the experiment config */
    std::string cfg_path, ov_mode, ov_out;
    std::uint64_t ov_seed = 0;
    std::size_t ov_gmax = 0;
    auto add_config_flags = [&](CLI::App *cmd) {
        cmd->add_option("--config", cfg_path, "experiment config JSON")->required();
        cmd->add_option("--mode", ov_mode, "override fitness mode: measured or cost_model");
        cmd->add_option("--out-dir", ov_out, "override output directory");
        cmd->add_option("--seed", ov_seed, "override the master seed");
        cmd->add_option("--generations", ov_gmax, "override g_max");
    };

    auto *search = app.add_subcommand("search", "run the genetic structure search");
    add_config_flags(search);

    auto *upscale = app.add_subcommand("upscale", "rebuild a found config on larger datasets");
    add_config_flags(upscale);
    std::string up_best;
    std::vector<std::size_t> up_sizes;
    upscale->add_option("--best", up_best, "best_config.json from a search run")->required();
    upscale->add_option("--sizes", up_sizes, "dataset sizes (default: config upscale_sizes)");

    auto *poc = app.add_subcommand("poc", "average-lookup-time comparison of contenders");
    add_config_flags(poc);
    std::vector<std::string> poc_contenders;
    std::size_t poc_runs = 5;
    poc->add_option("--contender", poc_contenders,
                    "hand_spec, btree, single_hash or an index config path (repeatable)");
    poc->add_option("--runs", poc_runs, "timed repetitions per contender");

    /* verify */
    auto *verify = app.add_subcommand("verify", "check an index config against a dataset");
    std::string vf_config, vf_file;
    std::size_t vf_uni = 0, vf_skew = 0, vf_sample = 0, vf_pairs = 10000;
    std::uint64_t vf_dseed = 1;
    bool vf_exhaustive = false;
    verify->add_option("--index-config", vf_config, "index config JSON")->required();
    add_dataset_flags(verify, vf_file, vf_uni, vf_skew, vf_dseed, vf_sample);
    verify->add_flag("--exhaustive", vf_exhaustive, "check every grid pair");
    verify->add_option("--pairs", vf_pairs, "sampled grid pairs when not exhaustive");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen_data) return cmd_gen_data(gd_kind, gd_n, gd_seed, gd_from, gd_out);
        if (*gen_wl) {
            Dataset ds = dataset_from_flags(gw_file, gw_uni, gw_skew, gw_dseed, gw_sample);
            return cmd_gen_workload(ds, gw_kind, gw_count, gw_seed, gw_sel, gw_mean, gw_stddev,
                                    gw_out);
        }
        if (*search or *upscale or *poc) {
            ExperimentConfig cfg = load_config(cfg_path);
            apply_overrides(cfg, ov_mode, ov_out, ov_seed, ov_gmax);
            if (*search) return cmd_search(cfg);
            if (*upscale) return cmd_upscale(cfg, up_best, up_sizes);
            return cmd_poc(cfg, poc_contenders, poc_runs);
        }
        if (*verify) {
            Dataset ds = dataset_from_flags(vf_file, vf_uni, vf_skew, vf_dseed, vf_sample);
            return cmd_verify(vf_config, ds, vf_exhaustive, vf_pairs);
        }
    } catch (const CorrectnessViolation &e) {
        std::cerr << "genidx: correctness violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "genidx: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
