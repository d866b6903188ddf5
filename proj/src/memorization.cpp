#include "tsp/memorization.hpp"

#include <algorithm>
#include <stdexcept>

namespace tsp {

RecallCurves compute_label_recall(std::span<const EpochCounts> counts, std::size_t clean_count,
                                  std::size_t noisy_count) {
    if (clean_count == 0 || noisy_count == 0) {
        throw std::runtime_error("label recall needs at least one clean and one noisy sample");
    }
    RecallCurves curves;
    curves.lr_clean.reserve(counts.size());
    curves.lr_noisy.reserve(counts.size());
    curves.ratio.reserve(counts.size());
    const double floor = 1.0 / static_cast<double>(noisy_count);
    for (const auto& c : counts) {
        double lr_clean = static_cast<double>(c.clean) / static_cast<double>(clean_count);
        double lr_noisy = static_cast<double>(c.noisy) / static_cast<double>(noisy_count);
        curves.lr_clean.push_back(lr_clean);
        curves.lr_noisy.push_back(lr_noisy);
        curves.ratio.push_back(lr_clean / std::max(lr_noisy, floor));
    }
    return curves;
}

int locate_e_mem(const RecallCurves& curves) {
    if (curves.ratio.size() < 2) {
        throw std::runtime_error("recall curves need at least 2 epochs");
    }
    std::size_t best = 0;
    for (std::size_t e = 1; e < curves.ratio.size(); ++e) {
        if (curves.ratio[e] > curves.ratio[best]) {
            best = e;
        }
    }
    return static_cast<int>(best);
}

int locate_e_sm(const RecallCurves& curves, int e_mem, int window) {
    const int last = curves.epoch_count() - 1;
    if (e_mem < 0 || e_mem > last) {
        throw std::runtime_error("e_mem out of range");
    }
    if (window < 1) {
        throw std::runtime_error("e_sm window must be >= 1");
    }
    const auto& ratio = curves.ratio;
    for (int t = e_mem + 1; t + window <= last; ++t) {
        bool dropping = true;
        for (int s = t; s < t + window; ++s) {
            if (!(ratio[static_cast<std::size_t>(s) + 1] < ratio[static_cast<std::size_t>(s)])) {
                dropping = false;
                break;
            }
        }
        if (dropping) {
            return t;
        }
    }
    return last;
}

std::string to_string(Stage stage) {
    switch (stage) {
    case Stage::PreMemorization:
        return "PM";
    case Stage::MildMemorization:
        return "MM";
    default:
        return "SM";
    }
}

MemorizationStages memorization_stages(const RecallCurves& curves, int window) {
    MemorizationStages result;
    result.e_mem = locate_e_mem(curves);
    result.e_sm = locate_e_sm(curves, result.e_mem, window);
    result.stages.reserve(curves.ratio.size());
    for (int e = 0; e < curves.epoch_count(); ++e) {
        if (e < result.e_mem) {
            result.stages.push_back(Stage::PreMemorization);
        } else if (e < result.e_sm) {
            result.stages.push_back(Stage::MildMemorization);
        } else {
            result.stages.push_back(Stage::SevereMemorization);
        }
    }
    return result;
}

PrecisionRecall label_precision_recall(std::span<const EpochCounts> counts, int epoch,
                                       std::size_t clean_count) {
    if (epoch < 0 || static_cast<std::size_t>(epoch) >= counts.size()) {
        throw std::runtime_error("epoch " + std::to_string(epoch) + " outside the counted range");
    }
    if (clean_count == 0) {
        throw std::runtime_error("label precision/recall needs clean_count >= 1");
    }
    const auto& c = counts[static_cast<std::size_t>(epoch)];
    PrecisionRecall pr;
    pr.recall = static_cast<double>(c.clean) / static_cast<double>(clean_count);
    if (c.total > 0) {
        pr.precision = static_cast<double>(c.clean) / static_cast<double>(c.total);
    }
    return pr;
}

} // namespace tsp
