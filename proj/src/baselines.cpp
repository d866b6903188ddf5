#include "tsp/baselines.hpp"

#include <stdexcept>

namespace tsp {

std::string to_string(BaselineMethod method) {
    switch (method) {
    case BaselineMethod::Nha:
        return "NHA";
    case BaselineMethod::Mota:
        return "MOTA";
    default:
        return "STANDARD";
    }
}

BaselineResult nha_point(std::span<const double> y_f, double tau) {
    if (!(tau >= 0.0 && tau < 1.0)) {
        throw std::runtime_error("tau must be in [0,1)");
    }
    const double threshold = 100.0 * (1.0 - tau);
    BaselineResult result{BaselineMethod::Nha, 0, false};
    for (std::size_t e = 0; e < y_f.size(); ++e) {
        if (y_f[e] >= threshold) {
            result.epoch = static_cast<int>(e);
            result.found = true;
            break;
        }
    }
    return result;
}

BaselineResult mota_point(std::span<const std::optional<double>> test_acc) {
    BaselineResult result{BaselineMethod::Mota, 0, false};
    for (std::size_t e = 0; e < test_acc.size(); ++e) {
        if (!test_acc[e]) {
            continue;
        }
        if (!result.found || *test_acc[e] > *test_acc[static_cast<std::size_t>(result.epoch)]) {
            result.epoch = static_cast<int>(e);
            result.found = true;
        }
    }
    return result;
}

BaselineResult standard_point(int epoch_count) {
    if (epoch_count < 1) {
        throw std::runtime_error("standard stop point needs at least 1 epoch");
    }
    return {BaselineMethod::Standard, epoch_count - 1, true};
}

} // namespace tsp
