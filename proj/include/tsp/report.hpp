#pragma once

#include "tsp/autotsp.hpp"
#include "tsp/baselines.hpp"
#include "tsp/memorization.hpp"
#include "tsp/training_log.hpp"

#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace tsp {

// Everything cmd_analyze computes, kept so the report and the plot files can
// be emitted from one pass.
struct Analysis {
    Hyperparams hyperparams;
    int esm_window = 5;
    std::optional<double> tau;

    TspResult tsp;
    BaselineResult standard;
    std::optional<BaselineResult> mota;
    std::optional<BaselineResult> nha;

    // Present when a ledger with true labels plus a trace were supplied.
    std::optional<std::vector<EpochCounts>> counts;
    std::optional<RecallCurves> curves;
    std::optional<MemorizationStages> stages;
    std::size_t sample_count = 0;
    std::size_t clean_count = 0;
    std::size_t noisy_count = 0;

    std::vector<std::string> warnings;

    bool fallback_used() const { return tsp.fallback.has_value() || tsp.region.fallback; }
};

// Runs the full pipeline. `ledger` and `trace` may be null; `tau` enables the
// NHA baseline. A trace shorter than the run is padded with empty epochs.
Analysis analyze_run(const TrainingRun& run, const SampleLedger* ledger,
                     const PredictionTrace* trace, std::optional<double> tau,
                     const Hyperparams& hp, int esm_window = 5);

// Input provenance recorded in the report.
struct InputFile {
    std::string path;
    std::string digest; // fnv1a64:<hex>
};

nlohmann::json build_report(const TrainingRun& run, const Analysis& analysis,
                            const std::map<std::string, InputFile>& inputs);

// Plot CSVs: memorization.csv (when ground truth is present) and one
// (proce|nroce)_beta<k>.csv per interval configuration.
void write_plot_csvs(const std::filesystem::path& dir, const TrainingRun& run,
                     const Analysis& analysis);

std::string fnv1a64_hex(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);

} // namespace tsp
