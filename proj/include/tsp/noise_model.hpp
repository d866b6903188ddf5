#pragma once

#include "tsp/training_log.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tsp {

enum class NoiseKind { Symmetric, Asymmetric };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Symmetric;
    double tau = 0.0;
    int class_count = 2;

    void validate() const; // tau in [0,1), class_count >= 2
};

// Row-stochastic c x c matrix, row = true class, column = observed class.
class TransitionMatrix {
public:
    TransitionMatrix(int class_count, std::vector<double> row_major);

    int class_count() const { return class_count_; }
    double at(int from, int to) const {
        return values_[static_cast<std::size_t>(from) * class_count_ + to];
    }
    double row_sum(int from) const;

private:
    int class_count_;
    std::vector<double> values_;
};

// Symmetric: diagonal 1-tau, off-diagonal tau/(c-1).
// Asymmetric: diagonal 1-tau, tau on the following class (wrapping at c-1).
TransitionMatrix build_transition_matrix(const NoiseSpec& spec);

struct CorruptionResult {
    std::vector<int> observed;
    SampleLedger ledger; // observed + true labels, ids "0".."D-1"
};

// Resamples each label independently per its transition-matrix row.
// Deterministic for a fixed seed.
CorruptionResult corrupt_labels(std::span<const int> true_labels, const NoiseSpec& spec,
                                std::uint64_t seed);

// Same corruption applied to an existing ledger whose observed labels are
// taken as the true labels; sample ids are preserved.
SampleLedger corrupt_ledger(const SampleLedger& clean, const NoiseSpec& spec, std::uint64_t seed);

} // namespace tsp
