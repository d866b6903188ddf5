#include "tsp/noise_model.hpp"

#include "tsp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tsp {

std::string to_string(NoiseKind kind) {
    return kind == NoiseKind::Symmetric ? "symmetric" : "asymmetric";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "symmetric" || name == "sym") {
        return NoiseKind::Symmetric;
    }
    if (name == "asymmetric" || name == "asym") {
        return NoiseKind::Asymmetric;
    }
    throw std::runtime_error("unknown noise kind '" + name + "'");
}

void NoiseSpec::validate() const {
    if (class_count < 2) {
        throw std::runtime_error("noise spec needs class_count >= 2");
    }
    if (!(tau >= 0.0 && tau < 1.0)) {
        throw std::runtime_error("noise rate tau must be in [0,1)");
    }
}

TransitionMatrix::TransitionMatrix(int class_count, std::vector<double> row_major)
    : class_count_(class_count), values_(std::move(row_major)) {
    if (class_count_ < 2 ||
        values_.size() != static_cast<std::size_t>(class_count_) * class_count_) {
        throw std::runtime_error("transition matrix must be c x c with c >= 2");
    }
    for (int i = 0; i < class_count_; ++i) {
        for (int j = 0; j < class_count_; ++j) {
            if (at(i, j) < 0.0) {
                throw std::runtime_error("transition matrix entries must be >= 0");
            }
        }
        if (std::abs(row_sum(i) - 1.0) > 1e-12) {
            throw std::runtime_error("transition matrix row " + std::to_string(i) +
                                     " does not sum to 1");
        }
    }
}

double TransitionMatrix::row_sum(int from) const {
    double sum = 0.0;
    for (int j = 0; j < class_count_; ++j) {
        sum += at(from, j);
    }
    return sum;
}

TransitionMatrix build_transition_matrix(const NoiseSpec& spec) {
    spec.validate();
    const int c = spec.class_count;
    std::vector<double> values(static_cast<std::size_t>(c) * c, 0.0);
    for (int i = 0; i < c; ++i) {
        values[static_cast<std::size_t>(i) * c + i] = 1.0 - spec.tau;
        if (spec.kind == NoiseKind::Symmetric) {
            const double off = spec.tau / (c - 1);
            for (int j = 0; j < c; ++j) {
                if (j != i) {
                    values[static_cast<std::size_t>(i) * c + j] = off;
                }
            }
        } else {
            values[static_cast<std::size_t>(i) * c + (i + 1) % c] += spec.tau;
        }
    }
    return TransitionMatrix(c, std::move(values));
}

namespace {

// Flip decision is Bernoulli(tau); the flip target is drawn uniformly among
// the other classes (symmetric) or is the following class (asymmetric).
// This realizes the transition-matrix rows exactly.
std::vector<int> corrupt_vector(std::span<const int> true_labels, const NoiseSpec& spec,
                                std::uint64_t seed) {
    spec.validate();
    const int c = spec.class_count;
    for (int label : true_labels) {
        if (label < 0 || label >= c) {
            throw std::runtime_error("label " + std::to_string(label) + " out of range [0," +
                                     std::to_string(c) + ")");
        }
    }
    Rng rng(seed);
    std::vector<int> observed(true_labels.begin(), true_labels.end());
    for (auto& label : observed) {
        if (!rng.bernoulli(spec.tau)) {
            continue;
        }
        if (spec.kind == NoiseKind::Asymmetric) {
            label = (label + 1) % c;
        } else {
            auto draw = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(c - 1)));
            label = draw < label ? draw : draw + 1; // skip the true class
        }
    }
    return observed;
}

} // namespace

CorruptionResult corrupt_labels(std::span<const int> true_labels, const NoiseSpec& spec,
                                std::uint64_t seed) {
    CorruptionResult result;
    result.observed = corrupt_vector(true_labels, spec, seed);
    result.ledger.class_count = spec.class_count;
    result.ledger.entries.reserve(true_labels.size());
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        result.ledger.entries.push_back(
            LedgerEntry{std::to_string(i), result.observed[i], true_labels[i]});
    }
    return result;
}

SampleLedger corrupt_ledger(const SampleLedger& clean, const NoiseSpec& spec, std::uint64_t seed) {
    std::vector<int> true_labels;
    true_labels.reserve(clean.entries.size());
    for (const auto& e : clean.entries) {
        true_labels.push_back(e.observed);
    }
    auto observed = corrupt_vector(true_labels, spec, seed);

    SampleLedger out;
    out.class_count = std::max(spec.class_count, clean.class_count);
    out.entries.reserve(clean.entries.size());
    for (std::size_t i = 0; i < clean.entries.size(); ++i) {
        out.entries.push_back(LedgerEntry{clean.entries[i].id, observed[i], true_labels[i]});
    }
    return out;
}

} // namespace tsp
