#include "tsp/report.hpp"
#include "tsp/sim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct AnalyzeArgs {
    std::string epochs_path;
    std::string format = "auto";
    std::string ledger_path;
    std::string trace_path;
    std::optional<double> tau;
    int classes = 0;
    std::vector<int> beta{5, 6, 7};
    double theta1 = 0.5;
    double theta2 = 0.5;
    std::string stop_rule = "argmax";
    std::string init_mode = "accumulate";
    std::string interval_mode = "compacted";
    std::string reduction_rule = "becomes-negative";
    std::string region_combine = "consensus";
    int esm_window = 5;
    bool rescale = false;
    std::string output_path;
    std::string plots_dir;
};

int run_analyze(const AnalyzeArgs& args) {
    tsp::LoadOptions load_options;
    load_options.rescale_fractional = args.rescale;
    tsp::RunFormat format = args.format == "auto" ? tsp::detect_run_format(args.epochs_path)
                            : args.format == "json" ? tsp::RunFormat::Json
                                                    : tsp::RunFormat::Csv;
    tsp::TrainingRun run = tsp::load_run(args.epochs_path, format, load_options);

    std::map<std::string, tsp::InputFile> inputs;
    inputs["epochs"] = {args.epochs_path, tsp::digest_file(args.epochs_path)};

    std::optional<tsp::SampleLedger> ledger;
    std::optional<tsp::PredictionTrace> trace;
    if (!args.ledger_path.empty()) {
        ledger = tsp::load_ledger(args.ledger_path, args.classes);
        inputs["ledger"] = {args.ledger_path, tsp::digest_file(args.ledger_path)};
    }
    if (!args.trace_path.empty()) {
        if (!ledger) {
            throw std::runtime_error("--trace requires --ledger");
        }
        trace = tsp::load_trace(args.trace_path, &*ledger);
        inputs["trace"] = {args.trace_path, tsp::digest_file(args.trace_path)};
    }

    tsp::Hyperparams hp;
    hp.beta_set = std::set<int>(args.beta.begin(), args.beta.end());
    hp.theta1 = args.theta1;
    hp.theta2 = args.theta2;
    hp.stop_rule = tsp::stop_rule_from_string(args.stop_rule);
    hp.init_mode = tsp::init_mode_from_string(args.init_mode);
    hp.interval_mode = tsp::interval_mode_from_string(args.interval_mode);
    hp.reduction_rule = tsp::reduction_rule_from_string(args.reduction_rule);
    hp.region_combine = tsp::region_combine_from_string(args.region_combine);

    tsp::Analysis analysis =
        tsp::analyze_run(run, ledger ? &*ledger : nullptr, trace ? &*trace : nullptr, args.tau,
                         hp, args.esm_window);
    nlohmann::json report = tsp::build_report(run, analysis, inputs);

    if (!args.plots_dir.empty()) {
        tsp::write_plot_csvs(args.plots_dir, run, analysis);
    }
    if (args.output_path.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        std::ofstream out(args.output_path);
        if (!out) {
            throw std::runtime_error("cannot write " + args.output_path);
        }
        out << report.dump(2) << '\n';
        std::cout << "e_tsp=" << analysis.tsp.e_tsp << " region=[" << analysis.tsp.region.lo
                  << "," << analysis.tsp.region.hi << "]"
                  << (analysis.fallback_used() ? " (fallback)" : "") << '\n';
    }
    return analysis.fallback_used() ? 2 : 0;
}

struct SimulateArgs {
    std::string out_dir;
    std::uint64_t seed = 1;
    std::size_t samples = 1000;
    int epochs = 200;
    double tau = 0.5;
    std::string kind = "sym";
    int classes = 10;
    std::vector<double> clean_onset{25.0, 10.0};
    std::vector<double> noisy_onset{110.0, 25.0};
    double retention = 0.98;
    std::vector<double> proxy{90.0, 60.0, 8.0};
    int batch = 1;
};

void write_scenario(const tsp::SimConfig& cfg, std::uint64_t seed, const fs::path& dir) {
    tsp::SimRun sim = tsp::simulate_run(cfg, seed);
    fs::create_directories(dir);
    tsp::write_run(sim.run, dir / "epochs.csv");
    tsp::write_ledger(sim.ledger, dir / "ledger.csv");
    tsp::write_trace(sim.trace, dir / "trace.csv");

    nlohmann::json truth;
    truth["seed"] = seed;
    truth["config"] = {{"samples", cfg.sample_count},
                       {"epochs", cfg.epoch_count},
                       {"tau", cfg.noise.tau},
                       {"kind", tsp::to_string(cfg.noise.kind)},
                       {"classes", cfg.noise.class_count},
                       {"clean_onset", {{"mean", cfg.clean_onset.mean}, {"spread", cfg.clean_onset.spread}}},
                       {"noisy_onset", {{"mean", cfg.noisy_onset.mean}, {"spread", cfg.noisy_onset.spread}}},
                       {"retention", cfg.retention},
                       {"proxy", {{"a", cfg.proxy.a}, {"b", cfg.proxy.b}, {"base", cfg.proxy.base}}}};
    truth["mota"] = sim.truth.mota;
    truth["clean"] = sim.truth.clean;
    truth["e_mem"] = sim.truth.e_mem ? nlohmann::json(*sim.truth.e_mem) : nlohmann::json(nullptr);
    truth["e_sm"] = sim.truth.e_sm ? nlohmann::json(*sim.truth.e_sm) : nlohmann::json(nullptr);
    std::ofstream out(dir / "truth.json");
    out << truth.dump(2) << '\n';

    std::cout << dir.string() << ": seed=" << seed << " mota=" << sim.truth.mota;
    if (sim.truth.e_mem) {
        std::cout << " e_mem=" << *sim.truth.e_mem << " e_sm=" << *sim.truth.e_sm;
    }
    if (sim.truth.clean) {
        std::cout << " (clean)";
    }
    std::cout << '\n';
}

int run_simulate(const SimulateArgs& args) {
    tsp::SimConfig cfg;
    cfg.sample_count = args.samples;
    cfg.epoch_count = args.epochs;
    cfg.noise = {tsp::noise_kind_from_string(args.kind), args.tau, args.classes};
    cfg.clean_onset = {args.clean_onset[0], args.clean_onset[1]};
    cfg.noisy_onset = {args.noisy_onset[0], args.noisy_onset[1]};
    cfg.retention = args.retention;
    cfg.proxy = {args.proxy[0], args.proxy[1], args.proxy[2]};
    cfg.validate();

    if (args.batch < 1) {
        throw std::runtime_error("--batch must be >= 1");
    }
    if (args.batch == 1) {
        write_scenario(cfg, args.seed, args.out_dir);
    } else {
        for (int i = 0; i < args.batch; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "scenario_%03d", i);
            write_scenario(cfg, args.seed + static_cast<std::uint64_t>(i),
                           fs::path(args.out_dir) / name);
        }
    }
    return 0;
}

struct CorruptArgs {
    std::string in_path;
    std::string out_path;
    double tau = 0.0;
    std::string kind = "sym";
    int classes = 0;
    std::uint64_t seed = 1;
};

int run_corrupt(const CorruptArgs& args) {
    tsp::SampleLedger clean = tsp::load_ledger(args.in_path, args.classes);
    tsp::NoiseSpec spec{tsp::noise_kind_from_string(args.kind), args.tau,
                        args.classes > 0 ? args.classes : clean.class_count};
    tsp::SampleLedger corrupted = tsp::corrupt_ledger(clean, spec, args.seed);
    tsp::write_ledger(corrupted, args.out_path);

    std::size_t flipped = corrupted.noisy_count();
    std::cout << "flipped " << flipped << " of " << corrupted.size() << " labels (rate "
              << static_cast<double>(flipped) / static_cast<double>(corrupted.size()) << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Training-stop-point analysis for noisy-label training runs"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Locate the training stop point in a run");
    analyze->add_option("--epochs", analyze_args.epochs_path, "epochs CSV/JSON file")->required();
    analyze->add_option("--format", analyze_args.format, "epochs file format")
        ->check(CLI::IsMember({"auto", "csv", "json"}));
    analyze->add_option("--ledger", analyze_args.ledger_path, "sample ledger CSV");
    analyze->add_option("--trace", analyze_args.trace_path, "prediction trace CSV");
    analyze->add_option("--tau", analyze_args.tau, "known noise rate, enables the NHA baseline");
    analyze->add_option("--classes", analyze_args.classes, "class count for the ledger");
    analyze->add_option("--beta", analyze_args.beta, "interval sizes")->delimiter(',');
    analyze->add_option("--theta1", analyze_args.theta1, "small-learning threshold");
    analyze->add_option("--theta2", analyze_args.theta2, "final guard threshold");
    analyze->add_option("--stop-rule", analyze_args.stop_rule, "argmax or last-nonzero")
        ->check(CLI::IsMember({"argmax", "last-nonzero"}));
    analyze->add_option("--init-mode", analyze_args.init_mode, "deficit carry mode")
        ->check(CLI::IsMember({"accumulate", "overwrite"}));
    analyze->add_option("--interval-mode", analyze_args.interval_mode, "interval indexing")
        ->check(CLI::IsMember({"compacted", "dense"}));
    analyze->add_option("--reduction-rule", analyze_args.reduction_rule,
                        "z-score drop detection")
        ->check(CLI::IsMember({"becomes-negative", "first-negative"}));
    analyze->add_option("--region-combine", analyze_args.region_combine,
                        "reduction point combination")
        ->check(CLI::IsMember({"consensus", "extremes"}));
    analyze->add_option("--esm-window", analyze_args.esm_window, "e_sm drop window");
    analyze->add_flag("--rescale", analyze_args.rescale, "accept fractional [0,1] accuracies");
    analyze->add_option("-o,--output", analyze_args.output_path, "report file (default stdout)");
    analyze->add_option("--plots", analyze_args.plots_dir, "directory for plot CSVs");

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic noisy-label run");
    simulate->add_option("--out", simulate_args.out_dir, "output directory")->required();
    simulate->add_option("--seed", simulate_args.seed, "random seed");
    simulate->add_option("--samples", simulate_args.samples, "sample count");
    simulate->add_option("--epochs", simulate_args.epochs, "epoch count");
    simulate->add_option("--tau", simulate_args.tau, "noise rate");
    simulate->add_option("--kind", simulate_args.kind, "noise kind")
        ->check(CLI::IsMember({"sym", "asym", "symmetric", "asymmetric"}));
    simulate->add_option("--classes", simulate_args.classes, "class count");
    simulate->add_option("--clean-onset", simulate_args.clean_onset, "mean,spread")
        ->delimiter(',')->expected(2);
    simulate->add_option("--noisy-onset", simulate_args.noisy_onset, "mean,spread")
        ->delimiter(',')->expected(2);
    simulate->add_option("--retention", simulate_args.retention, "per-epoch retention");
    simulate->add_option("--proxy", simulate_args.proxy, "a,b,base")->delimiter(',')->expected(3);
    simulate->add_option("--batch", simulate_args.batch, "number of scenarios");

    CorruptArgs corrupt_args;
    auto* corrupt = app.add_subcommand("corrupt", "Apply label noise to a clean ledger");
    corrupt->add_option("--in", corrupt_args.in_path, "clean ledger CSV")->required();
    corrupt->add_option("--out", corrupt_args.out_path, "corrupted ledger CSV")->required();
    corrupt->add_option("--tau", corrupt_args.tau, "noise rate")->required();
    corrupt->add_option("--kind", corrupt_args.kind, "noise kind")
        ->check(CLI::IsMember({"sym", "asym", "symmetric", "asymmetric"}));
    corrupt->add_option("--classes", corrupt_args.classes, "class count");
    corrupt->add_option("--seed", corrupt_args.seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) {
            return run_analyze(analyze_args);
        }
        if (*simulate) {
            return run_simulate(simulate_args);
        }
        return run_corrupt(corrupt_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
