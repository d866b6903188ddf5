#include "tsp/roc_region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsp {

std::string to_string(EventKind kind) {
    return kind == EventKind::Positive ? "PROCE" : "NROCE";
}

std::string to_string(IntervalMode mode) {
    return mode == IntervalMode::Compacted ? "compacted" : "dense";
}

IntervalMode interval_mode_from_string(const std::string& name) {
    if (name == "compacted") {
        return IntervalMode::Compacted;
    }
    if (name == "dense") {
        return IntervalMode::Dense;
    }
    throw std::runtime_error("unknown interval mode '" + name + "'");
}

std::string to_string(ReductionRule rule) {
    return rule == ReductionRule::BecomesNegative ? "becomes-negative" : "first-negative";
}

ReductionRule reduction_rule_from_string(const std::string& name) {
    if (name == "becomes-negative" || name == "becomes_negative") {
        return ReductionRule::BecomesNegative;
    }
    if (name == "first-negative" || name == "first_negative") {
        return ReductionRule::FirstNegative;
    }
    throw std::runtime_error("unknown reduction rule '" + name + "'");
}

std::string to_string(RegionCombine combine) {
    return combine == RegionCombine::Consensus ? "consensus" : "extremes";
}

RegionCombine region_combine_from_string(const std::string& name) {
    if (name == "consensus") {
        return RegionCombine::Consensus;
    }
    if (name == "extremes") {
        return RegionCombine::Extremes;
    }
    throw std::runtime_error("unknown region combination '" + name + "'");
}

std::pair<CompactedEvents, CompactedEvents> decompose_rates(std::span<const double> y_f) {
    if (y_f.size() < 2) {
        throw std::runtime_error("rate decomposition needs at least 2 epochs");
    }
    CompactedEvents proce{EventKind::Positive, {}};
    CompactedEvents nroce{EventKind::Negative, {}};
    for (std::size_t e = 1; e < y_f.size(); ++e) {
        const double delta = y_f[e] - y_f[e - 1];
        if (delta > 0.0) {
            proce.events.push_back({static_cast<int>(e), delta});
        } else if (delta < 0.0) {
            nroce.events.push_back({static_cast<int>(e), -delta});
        }
    }
    return {std::move(proce), std::move(nroce)};
}

namespace {

// Standardization with population (divide-by-n) variance; exact zero mean by
// construction of the z-scores.
void standardize(IntervalSums& result) {
    const std::size_t n = result.sums.size();
    if (n < 2) {
        result.degenerate = true;
        return;
    }
    double mean = 0.0;
    for (const auto& s : result.sums) {
        mean += s.sum;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& s : result.sums) {
        var += (s.sum - mean) * (s.sum - mean);
    }
    var /= static_cast<double>(n);
    if (var == 0.0) {
        result.degenerate = true;
        return;
    }
    const double stddev = std::sqrt(var);
    result.standardized.reserve(n);
    for (const auto& s : result.sums) {
        result.standardized.push_back((s.sum - mean) / stddev);
    }
    result.degenerate = false;
}

} // namespace

IntervalSums interval_sums(const CompactedEvents& events, int beta) {
    if (beta < 2) {
        throw std::runtime_error("interval length beta must be >= 2");
    }
    IntervalSums result;
    result.kind = events.kind;
    result.beta = beta;
    const std::size_t blocks = events.events.size() / static_cast<std::size_t>(beta);
    result.sums.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        IntervalSum block;
        block.representative_epoch = events.events[b * beta].epoch;
        for (std::size_t i = 0; i < static_cast<std::size_t>(beta); ++i) {
            block.sum += events.events[b * beta + i].magnitude;
        }
        result.sums.push_back(block);
    }
    standardize(result);
    return result;
}

IntervalSums interval_sums_dense(const CompactedEvents& events, int beta, int epoch_count) {
    if (beta < 2) {
        throw std::runtime_error("interval length beta must be >= 2");
    }
    if (epoch_count < 2) {
        throw std::runtime_error("dense interval sums need at least 2 epochs");
    }
    // Magnitude per epoch 1..E-1, zero where no event of this sign exists.
    std::vector<double> dense(static_cast<std::size_t>(epoch_count), 0.0);
    for (const auto& ev : events.events) {
        if (ev.epoch < 1 || ev.epoch >= epoch_count) {
            throw std::runtime_error("event epoch outside the run");
        }
        dense[static_cast<std::size_t>(ev.epoch)] = ev.magnitude;
    }

    IntervalSums result;
    result.kind = events.kind;
    result.beta = beta;
    const std::size_t usable = static_cast<std::size_t>(epoch_count) - 1; // epochs 1..E-1
    const std::size_t blocks = usable / static_cast<std::size_t>(beta);
    result.sums.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        IntervalSum block;
        const std::size_t first = 1 + b * static_cast<std::size_t>(beta);
        block.representative_epoch = static_cast<int>(first);
        for (std::size_t e = first; e < first + static_cast<std::size_t>(beta); ++e) {
            block.sum += dense[e];
        }
        result.sums.push_back(block);
    }
    standardize(result);
    return result;
}

ReductionPoint find_reduction_epoch(const IntervalSums& sums, int fallback_epoch,
                                    ReductionRule rule) {
    ReductionPoint point;
    point.source = sums.kind;
    point.beta = sums.beta;
    point.epoch = fallback_epoch;
    point.found = false;
    if (sums.degenerate) {
        return point;
    }
    const auto& z = sums.standardized;
    if (rule == ReductionRule::BecomesNegative) {
        bool seen_nonnegative = false;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] >= 0.0) {
                seen_nonnegative = true;
            } else if (seen_nonnegative) {
                point.epoch = sums.sums[i].representative_epoch;
                point.found = true;
                return point;
            }
        }
        // No drop from a non-negative value; fall through to the literal scan
        // (only reachable when every negative precedes every non-negative).
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] < 0.0) {
            point.epoch = sums.sums[i].representative_epoch;
            point.found = true;
            break;
        }
    }
    return point;
}

StopRegion stop_region(std::span<const double> y_f, const std::set<int>& beta_set,
                       IntervalMode mode, ReductionRule rule, RegionCombine combine) {
    if (beta_set.empty()) {
        throw std::runtime_error("beta set must not be empty");
    }
    const int last_epoch = static_cast<int>(y_f.size()) - 1;
    auto [proce, nroce] = decompose_rates(y_f);

    StopRegion region;
    std::vector<int> anchors; // one per source under Consensus
    for (const CompactedEvents* events : {&proce, &nroce}) {
        std::vector<int> found_epochs;
        for (int beta : beta_set) {
            IntervalSums sums =
                mode == IntervalMode::Compacted
                    ? interval_sums(*events, beta)
                    : interval_sums_dense(*events, beta, static_cast<int>(y_f.size()));
            ReductionPoint point = find_reduction_epoch(sums, last_epoch, rule);
            if (point.found) {
                found_epochs.push_back(point.epoch);
            }
            region.contributing.push_back(point);
        }
        if (!found_epochs.empty()) {
            std::sort(found_epochs.begin(), found_epochs.end());
            anchors.push_back(found_epochs[found_epochs.size() / 2]);
        }
    }

    int lo = last_epoch + 1;
    int hi = 0;
    if (combine == RegionCombine::Consensus) {
        for (int anchor : anchors) {
            lo = std::min(lo, anchor);
            hi = std::max(hi, anchor);
        }
    } else {
        for (const auto& point : region.contributing) {
            if (point.found) {
                lo = std::min(lo, point.epoch);
                hi = std::max(hi, point.epoch);
            }
        }
    }
    if (lo > hi) {
        region.lo = 1;
        region.hi = last_epoch;
        region.fallback = true;
    } else {
        region.lo = lo;
        region.hi = hi;
        region.fallback = false;
    }
    return region;
}

} // namespace tsp
