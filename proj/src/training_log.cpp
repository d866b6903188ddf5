#include "tsp/training_log.hpp"

#include "csv_util.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace tsp {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void check_percent(double v, const std::string& file, std::size_t line_no, const char* what) {
    if (!(v >= 0.0 && v <= 100.0)) {
        throw std::runtime_error(file + ":" + std::to_string(line_no) + ": " + what +
                                 " out of range [0,100]: " + format_double(v));
    }
}

// Shared tail of both loaders: epoch normalization, the fractional-scale
// guard and final validation.
TrainingRun finalize_run(std::vector<EpochRecord> records, std::map<std::string, std::string> meta,
                         const LoadOptions& options, const std::string& file) {
    if (records.size() < 2) {
        throw std::runtime_error(file + ": a run needs at least 2 epochs, got " +
                                 std::to_string(records.size()));
    }
    const int base = records.front().epoch;
    if (base != 0 && base != 1) {
        throw std::runtime_error(file + ": epochs must start at 0 or 1, got " +
                                 std::to_string(base));
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].epoch != base + static_cast<int>(i)) {
            throw std::runtime_error(file + ": non-contiguous epochs: expected " +
                                     std::to_string(base + static_cast<int>(i)) + ", got " +
                                     std::to_string(records[i].epoch));
        }
        records[i].epoch -= base;
    }
    if (base == 1) {
        meta["epoch_base"] = "1";
    }

    double max_acc = 0.0;
    for (const auto& r : records) {
        max_acc = std::max(max_acc, r.train_acc);
        if (r.test_acc) {
            max_acc = std::max(max_acc, *r.test_acc);
        }
    }
    if (max_acc <= 1.0) {
        if (!options.rescale_fractional) {
            throw std::runtime_error(file + ": accuracies never exceed 1, which looks like a "
                                            "fractional [0,1] scale; re-run with rescaling "
                                            "enabled to convert to percent");
        }
        for (auto& r : records) {
            r.train_acc *= 100.0;
            if (r.test_acc) {
                *r.test_acc *= 100.0;
            }
        }
        meta["rescaled_from_fraction"] = "true";
    }

    TrainingRun run{std::move(records), std::move(meta)};
    run.validate();
    return run;
}

TrainingRun load_run_csv(const std::filesystem::path& path, const LoadOptions& options) {
    detail::CsvReader csv(path.string());
    const bool with_test = detail::header_is(csv.header(), {"epoch", "train_acc", "test_acc"});
    if (!with_test && !detail::header_is(csv.header(), {"epoch", "train_acc"})) {
        throw std::runtime_error(csv.file() + ": expected header 'epoch,train_acc[,test_acc]'");
    }

    std::vector<EpochRecord> records;
    std::vector<std::string_view> fields;
    while (csv.next_row(fields)) {
        if (fields.size() != (with_test ? 3u : 2u)) {
            csv.fail("expected " + std::to_string(with_test ? 3 : 2) + " fields, got " +
                     std::to_string(fields.size()));
        }
        EpochRecord rec;
        rec.epoch = detail::parse_number<int>(fields[0], csv.file(), csv.line_no(), "epoch");
        rec.train_acc =
            detail::parse_number<double>(fields[1], csv.file(), csv.line_no(), "train_acc");
        check_percent(rec.train_acc, csv.file(), csv.line_no(), "train_acc");
        if (with_test && !detail::trim(fields[2]).empty()) {
            rec.test_acc =
                detail::parse_number<double>(fields[2], csv.file(), csv.line_no(), "test_acc");
            check_percent(*rec.test_acc, csv.file(), csv.line_no(), "test_acc");
        }
        records.push_back(rec);
    }
    return finalize_run(std::move(records), {{"source_format", "csv"}}, options, csv.file());
}

TrainingRun load_run_json(const std::filesystem::path& path, const LoadOptions& options) {
    const std::string file = path.string();
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + file);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(file + ": invalid JSON: " + e.what());
    }

    std::map<std::string, std::string> meta{{"source_format", "json"}};
    const nlohmann::json* recs = nullptr;
    if (doc.is_array()) {
        recs = &doc;
    } else if (doc.is_object() && doc.contains("records")) {
        recs = &doc["records"];
        if (doc.contains("metadata") && doc["metadata"].is_object()) {
            for (auto& [k, v] : doc["metadata"].items()) {
                meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
            }
        }
    } else {
        throw std::runtime_error(file + ": expected an array of records or an object "
                                        "with a 'records' array");
    }

    std::vector<EpochRecord> records;
    std::size_t i = 0;
    try {
        for (const auto& item : *recs) {
            ++i;
            EpochRecord rec;
            rec.epoch = item.at("epoch").get<int>();
            rec.train_acc = item.at("train_acc").get<double>();
            check_percent(rec.train_acc, file, i, "train_acc");
            if (item.contains("test_acc") && !item["test_acc"].is_null()) {
                rec.test_acc = item["test_acc"].get<double>();
                check_percent(*rec.test_acc, file, i, "test_acc");
            }
            records.push_back(rec);
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(file + ": record " + std::to_string(i) + ": " + e.what());
    }
    return finalize_run(std::move(records), std::move(meta), options, file);
}

} // namespace

std::vector<double> TrainingRun::train_accuracies() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(r.train_acc);
    }
    return out;
}

std::vector<std::optional<double>> TrainingRun::test_accuracies() const {
    std::vector<std::optional<double>> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(r.test_acc);
    }
    return out;
}

bool TrainingRun::has_test_accuracies() const {
    return std::any_of(records.begin(), records.end(),
                       [](const EpochRecord& r) { return r.test_acc.has_value(); });
}

void TrainingRun::validate() const {
    if (records.size() < 2) {
        throw std::runtime_error("training run needs at least 2 epochs");
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.epoch != static_cast<int>(i)) {
            throw std::runtime_error("non-contiguous epochs at position " + std::to_string(i));
        }
        if (!(r.train_acc >= 0.0 && r.train_acc <= 100.0)) {
            throw std::runtime_error("train_acc out of range at epoch " + std::to_string(r.epoch));
        }
        if (r.test_acc && !(*r.test_acc >= 0.0 && *r.test_acc <= 100.0)) {
            throw std::runtime_error("test_acc out of range at epoch " + std::to_string(r.epoch));
        }
    }
}

bool SampleLedger::has_true_labels() const {
    return !entries.empty() &&
           std::all_of(entries.begin(), entries.end(),
                       [](const LedgerEntry& e) { return e.true_label.has_value(); });
}

std::size_t SampleLedger::clean_count() const {
    return static_cast<std::size_t>(std::count_if(
        entries.begin(), entries.end(), [](const LedgerEntry& e) { return e.is_clean(); }));
}

std::size_t SampleLedger::noisy_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(),
                      [](const LedgerEntry& e) { return e.true_label && !e.is_clean(); }));
}

std::unordered_map<std::string, std::size_t> SampleLedger::index() const {
    std::unordered_map<std::string, std::size_t> idx;
    idx.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        idx.emplace(entries[i].id, i);
    }
    return idx;
}

void SampleLedger::validate() const {
    if (entries.empty()) {
        throw std::runtime_error("ledger is empty");
    }
    if (class_count < 2) {
        throw std::runtime_error("ledger class_count must be >= 2");
    }
    for (const auto& e : entries) {
        if (e.observed < 0 || e.observed >= class_count ||
            (e.true_label && (*e.true_label < 0 || *e.true_label >= class_count))) {
            throw std::runtime_error("ledger label out of range for sample '" + e.id + "'");
        }
    }
}

std::vector<EpochCounts> derive_counts(const PredictionTrace& trace, const SampleLedger& ledger) {
    if (!ledger.has_true_labels()) {
        throw std::runtime_error("derive_counts requires a ledger with true labels");
    }
    const auto idx = ledger.index();
    std::vector<char> clean_flag(trace.sample_ids.size());
    for (std::size_t i = 0; i < trace.sample_ids.size(); ++i) {
        auto it = idx.find(trace.sample_ids[i]);
        if (it == idx.end()) {
            throw std::runtime_error("trace references unknown sample_id '" +
                                     trace.sample_ids[i] + "'");
        }
        clean_flag[i] = ledger.entries[it->second].is_clean() ? 1 : 0;
    }

    std::vector<EpochCounts> counts(trace.correct.size());
    for (std::size_t e = 0; e < trace.correct.size(); ++e) {
        EpochCounts& c = counts[e];
        for (std::uint32_t sample : trace.correct[e]) {
            ++c.total;
            if (clean_flag[sample]) {
                ++c.clean;
            } else {
                ++c.noisy;
            }
        }
    }
    return counts;
}

std::vector<double> training_accuracy_from_counts(std::span<const EpochCounts> counts,
                                                  std::size_t sample_count) {
    if (sample_count == 0) {
        throw std::runtime_error("sample_count must be >= 1");
    }
    std::vector<double> y;
    y.reserve(counts.size());
    for (const auto& c : counts) {
        y.push_back(100.0 * static_cast<double>(c.total) / static_cast<double>(sample_count));
    }
    return y;
}

RunFormat detect_run_format(const std::filesystem::path& path) {
    return path.extension() == ".json" ? RunFormat::Json : RunFormat::Csv;
}

TrainingRun load_run(const std::filesystem::path& path, RunFormat format,
                     const LoadOptions& options) {
    return format == RunFormat::Json ? load_run_json(path, options) : load_run_csv(path, options);
}

TrainingRun load_run(const std::filesystem::path& path, const LoadOptions& options) {
    return load_run(path, detect_run_format(path), options);
}

std::string run_to_csv(const TrainingRun& run) {
    const bool with_test = run.has_test_accuracies();
    std::string out = with_test ? "epoch,train_acc,test_acc\n" : "epoch,train_acc\n";
    for (const auto& r : run.records) {
        out += std::to_string(r.epoch);
        out += ',';
        out += format_double(r.train_acc);
        if (with_test) {
            out += ',';
            if (r.test_acc) {
                out += format_double(*r.test_acc);
            }
        }
        out += '\n';
    }
    return out;
}

void write_run(const TrainingRun& run, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << run_to_csv(run);
}

SampleLedger load_ledger(const std::filesystem::path& path, int class_count) {
    detail::CsvReader csv(path.string());
    const bool with_true =
        detail::header_is(csv.header(), {"sample_id", "observed_label", "true_label"});
    if (!with_true && !detail::header_is(csv.header(), {"sample_id", "observed_label"})) {
        throw std::runtime_error(csv.file() +
                                 ": expected header 'sample_id,observed_label[,true_label]'");
    }

    SampleLedger ledger;
    std::unordered_map<std::string, std::size_t> seen;
    int max_label = -1;
    std::vector<std::string_view> fields;
    while (csv.next_row(fields)) {
        if (fields.size() != (with_true ? 3u : 2u)) {
            csv.fail("expected " + std::to_string(with_true ? 3 : 2) + " fields");
        }
        LedgerEntry entry;
        entry.id = std::string(detail::trim(fields[0]));
        if (entry.id.empty()) {
            csv.fail("empty sample_id");
        }
        entry.observed =
            detail::parse_number<int>(fields[1], csv.file(), csv.line_no(), "observed_label");
        max_label = std::max(max_label, entry.observed);
        if (with_true && !detail::trim(fields[2]).empty()) {
            entry.true_label =
                detail::parse_number<int>(fields[2], csv.file(), csv.line_no(), "true_label");
            max_label = std::max(max_label, *entry.true_label);
        }
        auto [it, inserted] = seen.emplace(entry.id, csv.line_no());
        if (!inserted) {
            csv.fail("duplicate sample_id '" + entry.id + "'");
        }
        ledger.entries.push_back(std::move(entry));
    }

    ledger.class_count = class_count > 0 ? class_count : std::max(max_label + 1, 2);
    ledger.validate();
    return ledger;
}

void write_ledger(const SampleLedger& ledger, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    const bool with_true =
        std::any_of(ledger.entries.begin(), ledger.entries.end(),
                    [](const LedgerEntry& e) { return e.true_label.has_value(); });
    out << (with_true ? "sample_id,observed_label,true_label\n" : "sample_id,observed_label\n");
    for (const auto& e : ledger.entries) {
        out << e.id << ',' << e.observed;
        if (with_true) {
            out << ',';
            if (e.true_label) {
                out << *e.true_label;
            }
        }
        out << '\n';
    }
}

PredictionTrace load_trace(const std::filesystem::path& path, const SampleLedger* ledger) {
    detail::CsvReader csv(path.string());
    const bool predicted_variant =
        detail::header_is(csv.header(), {"epoch", "sample_id", "predicted_label"});
    if (!predicted_variant && !detail::header_is(csv.header(), {"epoch", "sample_id", "correct"})) {
        throw std::runtime_error(csv.file() + ": expected header 'epoch,sample_id,correct' or "
                                              "'epoch,sample_id,predicted_label'");
    }
    std::optional<std::unordered_map<std::string, std::size_t>> ledger_idx;
    if (predicted_variant) {
        if (!ledger) {
            throw std::runtime_error(csv.file() + ": the predicted_label variant needs a ledger "
                                                  "to reduce predictions to correctness");
        }
        ledger_idx = ledger->index();
    }

    PredictionTrace trace;
    std::unordered_map<std::string, std::uint32_t> intern;
    std::vector<std::string_view> fields;
    while (csv.next_row(fields)) {
        if (fields.size() != 3) {
            csv.fail("expected 3 fields");
        }
        int epoch = detail::parse_number<int>(fields[0], csv.file(), csv.line_no(), "epoch");
        if (epoch < 0) {
            csv.fail("negative epoch");
        }
        std::string id(detail::trim(fields[1]));
        int value = detail::parse_number<int>(fields[2], csv.file(), csv.line_no(),
                                              predicted_variant ? "predicted_label" : "correct");
        bool correct;
        if (predicted_variant) {
            auto it = ledger_idx->find(id);
            if (it == ledger_idx->end()) {
                csv.fail("unknown sample_id '" + id + "'");
            }
            correct = value == ledger->entries[it->second].observed;
        } else {
            if (value != 0 && value != 1) {
                csv.fail("correct must be 0 or 1");
            }
            correct = value == 1;
        }
        if (static_cast<std::size_t>(epoch) >= trace.correct.size()) {
            trace.correct.resize(static_cast<std::size_t>(epoch) + 1);
        }
        if (!correct) {
            continue;
        }
        auto [it, inserted] = intern.emplace(id, static_cast<std::uint32_t>(trace.sample_ids.size()));
        if (inserted) {
            trace.sample_ids.push_back(std::move(id));
        }
        trace.correct[static_cast<std::size_t>(epoch)].push_back(it->second);
    }

    // Duplicate (epoch, sample) rows collapse to one membership.
    for (auto& epoch_hits : trace.correct) {
        std::sort(epoch_hits.begin(), epoch_hits.end());
        epoch_hits.erase(std::unique(epoch_hits.begin(), epoch_hits.end()), epoch_hits.end());
    }
    return trace;
}

void write_trace(const PredictionTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "epoch,sample_id,correct\n";
    for (std::size_t e = 0; e < trace.correct.size(); ++e) {
        for (std::uint32_t sample : trace.correct[e]) {
            out << e << ',' << trace.sample_ids[sample] << ",1\n";
        }
    }
}

} // namespace tsp
