#pragma once

#include "tsp/training_log.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsp {

// Per-epoch label recall of clean and noisy samples, and their ratio.
// The ratio divides by max(lr_noisy, 1/D_noisy) so that an epoch with zero
// noisy recall maps to a finite value at the one-sample resolution floor.
struct RecallCurves {
    std::vector<double> lr_clean;
    std::vector<double> lr_noisy;
    std::vector<double> ratio;

    int epoch_count() const { return static_cast<int>(ratio.size()); }
};

RecallCurves compute_label_recall(std::span<const EpochCounts> counts, std::size_t clean_count,
                                  std::size_t noisy_count);

// Earliest epoch of maximum recall ratio; separates pre- from mild-memorization.
int locate_e_mem(const RecallCurves& curves);

// First epoch t > e_mem from which the ratio strictly decreases for `window`
// consecutive steps; E-1 when no such point exists. Separates mild from
// severe memorization.
int locate_e_sm(const RecallCurves& curves, int e_mem, int window = 5);

enum class Stage { PreMemorization, MildMemorization, SevereMemorization };

std::string to_string(Stage stage); // "PM" / "MM" / "SM"

struct MemorizationStages {
    int e_mem = 0;
    int e_sm = 0;
    std::vector<Stage> stages; // one per epoch
};

MemorizationStages memorization_stages(const RecallCurves& curves, int window = 5);

// LP = S_clean / S (absent when S = 0), LR = S_clean / D_clean; both in [0,1].
struct PrecisionRecall {
    std::optional<double> precision;
    double recall = 0.0;
};

PrecisionRecall label_precision_recall(std::span<const EpochCounts> counts, int epoch,
                                       std::size_t clean_count);

} // namespace tsp
