#pragma once

#include "tsp/roc_region.hpp"
#include "tsp/training_log.hpp"

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace tsp {

enum class StopRule { ArgmaxSegment, LastNonzero };

std::string to_string(StopRule rule);
StopRule stop_rule_from_string(const std::string& name);

// How the deficit carried out of small-learning epochs evolves: accumulate
// sums every SLE magnitude until compensated; overwrite keeps only the most
// recent one.
enum class InitMode { Accumulate, Overwrite };

std::string to_string(InitMode mode);
InitMode init_mode_from_string(const std::string& name);

struct Hyperparams {
    std::set<int> beta_set{5, 6, 7};
    double theta1 = 0.5; // small-learning threshold, percentage points
    double theta2 = 0.5; // final guard threshold, percentage points
    StopRule stop_rule = StopRule::ArgmaxSegment;
    InitMode init_mode = InitMode::Accumulate;
    IntervalMode interval_mode = IntervalMode::Compacted;
    ReductionRule reduction_rule = ReductionRule::BecomesNegative;
    RegionCombine region_combine = RegionCombine::Consensus;

    void validate() const;
    // Smallest run length find_tsp accepts: 2 * min(beta_set) + 2.
    int min_epochs() const;
};

// Running maximum of the training accuracy and its per-epoch increments.
// Both vectors are epoch-indexed (length E); mt[0] is 0 by convention.
struct MaxTrace {
    std::vector<double> running_max;
    std::vector<double> mt;
};

MaxTrace running_max_rate(std::span<const double> y_f);

// Deficit-compensated increments, index-aligned with the input.
//   c       final values after the theta2 guard
//   c_raw   values before the guard, for auditing
//   deficit running carried deficit (<= 0) after each step
struct CompensationTrace {
    std::vector<double> c;
    std::vector<double> c_raw;
    std::vector<double> deficit;
};

// Walks the increment sequence once: magnitudes at or below theta1 are
// small-learning epochs whose mass is carried as a deficit; larger magnitudes
// emit their value net of the deficit once it turns positive. A final guard
// zeroes entries with magnitude below theta2.
CompensationTrace compensation_trace(std::span<const double> mt, double theta1, double theta2,
                                     InitMode init_mode = InitMode::Accumulate);

struct Segment {
    int start_epoch = 0;
    int end_epoch = 0;
    double sum = 0.0;
};

// Maximal runs of strictly positive compensation values within the region.
std::vector<Segment> segment_sums(const CompensationTrace& trace, const StopRegion& region);

struct TspResult {
    int e_tsp = 0;
    StopRegion region;
    std::vector<Segment> segments;
    std::optional<std::string> fallback;
    MaxTrace max_trace;
    CompensationTrace compensation;
};

// The full pipeline: stop region, running-max increments, compensation,
// segment sums, and the stop-point pick per the configured rule.
TspResult find_tsp(const TrainingRun& run, const Hyperparams& hp);

} // namespace tsp
