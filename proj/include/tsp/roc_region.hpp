#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

namespace tsp {

enum class EventKind { Positive, Negative };

std::string to_string(EventKind kind); // "PROCE" / "NROCE"

struct RateEvent {
    int epoch = 0;        // >= 1
    double magnitude = 0; // > 0, percentage points
};

// Ordered per-epoch changes of one sign, compacted: zero-change epochs
// belong to neither list.
struct CompactedEvents {
    EventKind kind = EventKind::Positive;
    std::vector<RateEvent> events;
};

// Splits the trajectory's per-epoch deltas into positive and negative
// magnitude lists (PROCE, NROCE).
std::pair<CompactedEvents, CompactedEvents> decompose_rates(std::span<const double> y_f);

struct IntervalSum {
    int representative_epoch = 0; // epoch of the block's first event
    double sum = 0.0;
};

// Cumulative magnitudes over consecutive blocks of `beta` events, plus their
// z-scores (population variance). Degenerate when fewer than 2 complete
// blocks exist or all block sums are equal.
struct IntervalSums {
    EventKind kind = EventKind::Positive;
    int beta = 0;
    std::vector<IntervalSum> sums;
    std::vector<double> standardized;
    bool degenerate = true;
};

// Blocks of `beta` consecutive events; a trailing partial block is dropped.
IntervalSums interval_sums(const CompactedEvents& events, int beta);

// Variant that spreads the events over the dense epoch axis 1..E-1 with zero
// magnitude where the sign does not match, then blocks `beta` epochs at a time.
IntervalSums interval_sums_dense(const CompactedEvents& events, int beta, int epoch_count);

enum class IntervalMode { Compacted, Dense };

std::string to_string(IntervalMode mode);
IntervalMode interval_mode_from_string(const std::string& name);

// How a z-score sequence is read for the drop that marks the reduction.
//   BecomesNegative  first interval below zero after one at or above zero;
//                    if the sequence starts negative and never recovers
//                    before its negatives, the first negative interval.
//   FirstNegative    first interval below zero, unconditionally.
enum class ReductionRule { BecomesNegative, FirstNegative };

std::string to_string(ReductionRule rule);
ReductionRule reduction_rule_from_string(const std::string& name);

struct ReductionPoint {
    EventKind source = EventKind::Positive;
    int beta = 0;
    int epoch = 0;
    bool found = false;
};

ReductionPoint find_reduction_epoch(const IntervalSums& sums, int fallback_epoch,
                                    ReductionRule rule = ReductionRule::BecomesNegative);

// How the per-(source, beta) reduction points combine into one region.
//   Consensus  one anchor per source, the median over its interval sizes;
//              the region spans the two anchors.
//   Extremes   global min/max over every found point.
enum class RegionCombine { Consensus, Extremes };

std::string to_string(RegionCombine combine);
RegionCombine region_combine_from_string(const std::string& name);

struct StopRegion {
    int lo = 0;
    int hi = 0;
    std::vector<ReductionPoint> contributing; // all (source, beta) points, found or not
    bool fallback = false;                    // true when no reduction point was found
};

// Region spanned by the reduction points of PROCE and NROCE across the
// interval sizes; [1, E-1] with the fallback flag when none is found.
StopRegion stop_region(std::span<const double> y_f, const std::set<int>& beta_set,
                       IntervalMode mode = IntervalMode::Compacted,
                       ReductionRule rule = ReductionRule::BecomesNegative,
                       RegionCombine combine = RegionCombine::Consensus);

} // namespace tsp
