#pragma once

#include <optional>
#include <span>
#include <string>

namespace tsp {

enum class BaselineMethod { Nha, Mota, Standard };

std::string to_string(BaselineMethod method);

struct BaselineResult {
    BaselineMethod method = BaselineMethod::Standard;
    int epoch = 0;
    bool found = false;
};

// First epoch where the training accuracy reaches 100*(1-tau) percent; the
// noise-heuristic rule, assuming the noise ratio is known.
BaselineResult nha_point(std::span<const double> y_f, double tau);

// Earliest epoch of maximum test accuracy (the oracle stop point). Epochs
// without a test value are skipped; found=false when none is present.
BaselineResult mota_point(std::span<const std::optional<double>> test_acc);

// No early stopping: the final epoch.
BaselineResult standard_point(int epoch_count);

} // namespace tsp
