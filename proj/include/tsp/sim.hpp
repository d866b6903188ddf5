#pragma once

#include "tsp/noise_model.hpp"
#include "tsp/training_log.hpp"

#include <cstdint>
#include <optional>

namespace tsp {

struct OnsetSpec {
    double mean = 0.0;   // epochs
    double spread = 1.0; // standard deviation, epochs
};

// Proxy test accuracy: base + a * LR_clean - b * LR_noisy, clamped to [0,100].
struct ProxySpec {
    double a = 90.0;
    double b = 60.0;
    double base = 8.0;
};

struct SimConfig {
    std::size_t sample_count = 1000;
    NoiseSpec noise{NoiseKind::Symmetric, 0.5, 10};
    int epoch_count = 200;
    OnsetSpec clean_onset{25.0, 10.0};
    OnsetSpec noisy_onset{110.0, 25.0};
    double retention = 0.98; // P(correct) once a sample's onset has passed
    ProxySpec proxy;

    void validate() const;
};

// P(correct) before a sample's onset epoch.
inline constexpr double kBackgroundCorrectRate = 0.02;

struct SimTruth {
    std::optional<int> e_mem; // absent for clean (tau = 0) runs
    std::optional<int> e_sm;
    int mota = 0;
    bool clean = false;
};

struct SimRun {
    TrainingRun run; // test_acc carries the proxy curve
    PredictionTrace trace;
    SampleLedger ledger;
    SimTruth truth;
};

// Synthetic noisy-label training dynamics: clean samples are learned around
// clean_onset, noisy ones around noisy_onset, and the proxy test curve peaks
// in between. Deterministic per seed.
SimRun simulate_run(const SimConfig& cfg, std::uint64_t seed);

} // namespace tsp
