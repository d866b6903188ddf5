#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tsp {

// One row of a training log. Accuracies are percentages in [0, 100].
struct EpochRecord {
    int epoch = 0;
    double train_acc = 0.0;
    std::optional<double> test_acc;
};

// Per-epoch accuracy trajectory. Epochs are contiguous 0..E-1 with E >= 2.
struct TrainingRun {
    std::vector<EpochRecord> records;
    std::map<std::string, std::string> metadata;

    int epoch_count() const { return static_cast<int>(records.size()); }
    std::vector<double> train_accuracies() const;
    std::vector<std::optional<double>> test_accuracies() const;
    bool has_test_accuracies() const;

    // Throws std::runtime_error on any invariant violation.
    void validate() const;
};

struct LedgerEntry {
    std::string id;
    int observed = 0;
    std::optional<int> true_label;

    bool is_clean() const { return true_label && *true_label == observed; }
};

// Observed (and optionally true) labels for every training sample.
struct SampleLedger {
    std::vector<LedgerEntry> entries;
    int class_count = 0;

    std::size_t size() const { return entries.size(); }
    bool has_true_labels() const;
    std::size_t clean_count() const;
    std::size_t noisy_count() const;
    // id -> position in entries
    std::unordered_map<std::string, std::size_t> index() const;

    void validate() const;
};

// Per-epoch sets of correctly predicted samples, with ids interned in a
// table local to the trace. Membership means prediction == observed label.
struct PredictionTrace {
    std::vector<std::string> sample_ids;
    std::vector<std::vector<std::uint32_t>> correct; // per epoch, indices into sample_ids

    int epoch_count() const { return static_cast<int>(correct.size()); }
};

// S, S_clean, S_noisy at one epoch.
struct EpochCounts {
    std::int64_t total = 0;
    std::int64_t clean = 0;
    std::int64_t noisy = 0;
};

// Tallies correct predictions per epoch against the ledger's ground truth.
// Requires true labels on every ledger entry; throws if the trace references
// a sample id the ledger does not contain.
std::vector<EpochCounts> derive_counts(const PredictionTrace& trace, const SampleLedger& ledger);

// y_f(e) = 100 * S(e) / D
std::vector<double> training_accuracy_from_counts(std::span<const EpochCounts> counts,
                                                  std::size_t sample_count);

enum class RunFormat { Csv, Json };

struct LoadOptions {
    // Accept accuracies that look fractional (max <= 1) and scale them by 100.
    bool rescale_fractional = false;
};

RunFormat detect_run_format(const std::filesystem::path& path);

// Reads `epoch,train_acc[,test_acc]` CSV or the JSON equivalent, validates,
// and normalizes 1-based epoch numbering to 0-based (noted in metadata).
TrainingRun load_run(const std::filesystem::path& path, RunFormat format,
                     const LoadOptions& options = {});
TrainingRun load_run(const std::filesystem::path& path, const LoadOptions& options = {});

// Canonical CSV; numbers are written with shortest round-trip formatting so a
// reload reproduces the values bit-exactly.
void write_run(const TrainingRun& run, const std::filesystem::path& path);
std::string run_to_csv(const TrainingRun& run);

// `sample_id,observed_label[,true_label]`. class_count is inferred as
// max(label) + 1 unless the caller supplies one.
SampleLedger load_ledger(const std::filesystem::path& path, int class_count = 0);
void write_ledger(const SampleLedger& ledger, const std::filesystem::path& path);

// `epoch,sample_id,correct` or `epoch,sample_id,predicted_label`; the latter
// is reduced to correctness against the ledger's observed labels.
PredictionTrace load_trace(const std::filesystem::path& path,
                           const SampleLedger* ledger = nullptr);
void write_trace(const PredictionTrace& trace, const std::filesystem::path& path);

} // namespace tsp
