#include "tsp/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tsp {

namespace {

// Literal region combination printed in the paper's supplementary material:
// min(min(NROCE), max(PROCE)) .. max(max(NROCE), max(PROCE)). Used only to
// surface a warning when it differs from the symmetric min/max rule.
std::optional<std::pair<int, int>> literal_region(const StopRegion& region) {
    std::optional<int> nroce_min, nroce_max, proce_max;
    for (const auto& p : region.contributing) {
        if (!p.found) {
            continue;
        }
        if (p.source == EventKind::Negative) {
            nroce_min = nroce_min ? std::min(*nroce_min, p.epoch) : p.epoch;
            nroce_max = nroce_max ? std::max(*nroce_max, p.epoch) : p.epoch;
        } else {
            proce_max = proce_max ? std::max(*proce_max, p.epoch) : p.epoch;
        }
    }
    if (!nroce_min || !proce_max) {
        return std::nullopt;
    }
    int lo = std::min(*nroce_min, *proce_max);
    int hi = std::max(*nroce_max, *proce_max);
    return std::make_pair(lo, hi);
}

nlohmann::json baseline_row(const TrainingRun& run, const Analysis& analysis, int epoch,
                            bool found) {
    nlohmann::json row;
    row["found"] = found;
    if (!found) {
        return row;
    }
    row["epoch"] = epoch;
    const auto& rec = run.records[static_cast<std::size_t>(epoch)];
    row["train_acc"] = rec.train_acc;
    if (rec.test_acc) {
        row["test_acc"] = *rec.test_acc;
    }
    if (analysis.counts && analysis.clean_count > 0) {
        PrecisionRecall pr = label_precision_recall(*analysis.counts, epoch, analysis.clean_count);
        // Percent scale, matching how LP/LR are usually tabulated.
        if (pr.precision) {
            row["lp"] = 100.0 * *pr.precision;
        }
        row["lr"] = 100.0 * pr.recall;
    }
    return row;
}

} // namespace

Analysis analyze_run(const TrainingRun& run, const SampleLedger* ledger,
                     const PredictionTrace* trace, std::optional<double> tau,
                     const Hyperparams& hp, int esm_window) {
    run.validate();
    Analysis analysis;
    analysis.hyperparams = hp;
    analysis.esm_window = esm_window;
    analysis.tau = tau;

    analysis.tsp = find_tsp(run, hp);
    if (analysis.tsp.region.fallback) {
        analysis.warnings.push_back("stop region fell back to [1, E-1]: no reduction point found");
    }
    if (analysis.tsp.fallback) {
        analysis.warnings.push_back("e_tsp fallback: " + *analysis.tsp.fallback);
    }

    // The init-mode ambiguity is surfaced whenever it changes the answer.
    {
        Hyperparams other = hp;
        other.init_mode =
            hp.init_mode == InitMode::Accumulate ? InitMode::Overwrite : InitMode::Accumulate;
        TspResult alt = find_tsp(run, other);
        if (alt.e_tsp != analysis.tsp.e_tsp) {
            analysis.warnings.push_back("init mode '" + to_string(other.init_mode) +
                                        "' would give e_tsp=" + std::to_string(alt.e_tsp));
        }
    }
    if (auto literal = literal_region(analysis.tsp.region)) {
        if (literal->first != analysis.tsp.region.lo || literal->second != analysis.tsp.region.hi) {
            analysis.warnings.push_back(
                "literal supplementary region combination would give [" +
                std::to_string(literal->first) + ", " + std::to_string(literal->second) + "]");
        }
    }

    const auto y_f = run.train_accuracies();
    analysis.standard = standard_point(run.epoch_count());
    if (run.has_test_accuracies()) {
        analysis.mota = mota_point(run.test_accuracies());
    }
    if (tau) {
        analysis.nha = nha_point(y_f, *tau);
    }

    if (ledger && trace) {
        if (trace->epoch_count() > run.epoch_count()) {
            throw std::runtime_error("trace has " + std::to_string(trace->epoch_count()) +
                                     " epochs but the run only has " +
                                     std::to_string(run.epoch_count()));
        }
        PredictionTrace padded = *trace;
        padded.correct.resize(static_cast<std::size_t>(run.epoch_count()));
        analysis.counts = derive_counts(padded, *ledger);
        analysis.sample_count = ledger->size();
        analysis.clean_count = ledger->clean_count();
        analysis.noisy_count = ledger->noisy_count();
        if (analysis.clean_count > 0 && analysis.noisy_count > 0) {
            analysis.curves =
                compute_label_recall(*analysis.counts, analysis.clean_count, analysis.noisy_count);
            analysis.stages = memorization_stages(*analysis.curves, esm_window);
        } else {
            analysis.warnings.push_back("ledger has no " +
                                        std::string(analysis.clean_count == 0 ? "clean" : "noisy") +
                                        " samples; memorization stages skipped");
        }
    }
    return analysis;
}

nlohmann::json build_report(const TrainingRun& run, const Analysis& analysis,
                            const std::map<std::string, InputFile>& inputs) {
    nlohmann::json report;
    report["schema_version"] = 1;

    nlohmann::json inputs_json;
    for (const auto& [name, file] : inputs) {
        inputs_json[name] = {{"path", file.path}, {"digest", file.digest}};
    }
    inputs_json["epochs"]["epoch_count"] = run.epoch_count();
    if (analysis.counts) {
        inputs_json["ledger"]["sample_count"] = analysis.sample_count;
        inputs_json["ledger"]["clean_count"] = analysis.clean_count;
        inputs_json["ledger"]["noisy_count"] = analysis.noisy_count;
    }
    report["inputs"] = inputs_json;

    const auto& hp = analysis.hyperparams;
    nlohmann::json hp_json;
    hp_json["beta_set"] = hp.beta_set;
    hp_json["theta1"] = hp.theta1;
    hp_json["theta2"] = hp.theta2;
    hp_json["stop_rule"] = to_string(hp.stop_rule);
    hp_json["init_mode"] = to_string(hp.init_mode);
    hp_json["interval_mode"] = to_string(hp.interval_mode);
    hp_json["reduction_rule"] = to_string(hp.reduction_rule);
    hp_json["region_combine"] = to_string(hp.region_combine);
    hp_json["esm_window"] = analysis.esm_window;
    if (analysis.tau) {
        hp_json["tau"] = *analysis.tau;
    }

    nlohmann::json autotsp;
    autotsp["e_tsp"] = analysis.tsp.e_tsp;
    autotsp["stop_rule"] = to_string(hp.stop_rule);
    autotsp["region"] = {{"lo", analysis.tsp.region.lo}, {"hi", analysis.tsp.region.hi}};
    autotsp["segments"] = nlohmann::json::array();
    for (const auto& s : analysis.tsp.segments) {
        autotsp["segments"].push_back(
            {{"start", s.start_epoch}, {"end", s.end_epoch}, {"sum", s.sum}});
    }
    autotsp["fallback"] = analysis.tsp.fallback ? nlohmann::json(*analysis.tsp.fallback)
                                                : nlohmann::json(nullptr);
    autotsp["hyperparams"] = hp_json;
    report["autotsp"] = autotsp;

    nlohmann::json region;
    region["lo"] = analysis.tsp.region.lo;
    region["hi"] = analysis.tsp.region.hi;
    region["fallback"] = analysis.tsp.region.fallback;
    region["points"] = nlohmann::json::array();
    for (const auto& p : analysis.tsp.region.contributing) {
        region["points"].push_back({{"source", to_string(p.source)},
                                    {"beta", p.beta},
                                    {"epoch", p.epoch},
                                    {"found", p.found}});
    }
    report["region"] = region;

    nlohmann::json baselines;
    baselines["autotsp"] = baseline_row(run, analysis, analysis.tsp.e_tsp, true);
    baselines["standard"] = baseline_row(run, analysis, analysis.standard.epoch, true);
    if (analysis.mota) {
        baselines["mota"] = baseline_row(run, analysis, analysis.mota->epoch, analysis.mota->found);
    }
    if (analysis.nha) {
        baselines["nha"] = baseline_row(run, analysis, analysis.nha->epoch, analysis.nha->found);
    }
    report["baselines"] = baselines;

    if (analysis.stages) {
        nlohmann::json memo;
        memo["e_mem"] = analysis.stages->e_mem;
        memo["e_sm"] = analysis.stages->e_sm;
        memo["esm_window"] = analysis.esm_window;
        memo["esm_rule"] = "first epoch followed by " + std::to_string(analysis.esm_window) +
                           " consecutive strict ratio drops (one admissible reading)";
        report["memorization"] = memo;
    }

    report["warnings"] = analysis.warnings;
    return report;
}

void write_plot_csvs(const std::filesystem::path& dir, const TrainingRun& run,
                     const Analysis& analysis) {
    std::filesystem::create_directories(dir);
    char buf[64];

    const auto y_f = run.train_accuracies();
    auto [proce, nroce] = decompose_rates(y_f);
    for (const CompactedEvents* events : {&proce, &nroce}) {
        for (int beta : analysis.hyperparams.beta_set) {
            IntervalSums sums =
                analysis.hyperparams.interval_mode == IntervalMode::Compacted
                    ? interval_sums(*events, beta)
                    : interval_sums_dense(*events, beta, run.epoch_count());
            std::snprintf(buf, sizeof(buf), "%s_beta%d.csv",
                          events->kind == EventKind::Positive ? "proce" : "nroce", beta);
            std::ofstream out(dir / buf);
            out << "representative_epoch,interval_sum,z_score\n";
            for (std::size_t i = 0; i < sums.sums.size(); ++i) {
                out << sums.sums[i].representative_epoch << ',' << sums.sums[i].sum << ',';
                if (!sums.degenerate) {
                    out << sums.standardized[i];
                }
                out << '\n';
            }
        }
    }

    if (analysis.curves && analysis.stages) {
        std::ofstream out(dir / "memorization.csv");
        out << "epoch,lr_clean,lr_noisy,ratio,stage\n";
        for (int e = 0; e < analysis.curves->epoch_count(); ++e) {
            const auto idx = static_cast<std::size_t>(e);
            out << e << ',' << analysis.curves->lr_clean[idx] << ','
                << analysis.curves->lr_noisy[idx] << ',' << analysis.curves->ratio[idx] << ','
                << to_string(analysis.stages->stages[idx]) << '\n';
        }
    }
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return "fnv1a64:" + fnv1a64_hex(buffer.str());
}

} // namespace tsp
