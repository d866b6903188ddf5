#include "tsp/autotsp.hpp"

#include <algorithm>
#include <stdexcept>

namespace tsp {

std::string to_string(StopRule rule) {
    return rule == StopRule::ArgmaxSegment ? "argmax_segment" : "last_nonzero";
}

StopRule stop_rule_from_string(const std::string& name) {
    if (name == "argmax_segment" || name == "argmax") {
        return StopRule::ArgmaxSegment;
    }
    if (name == "last_nonzero" || name == "last-nonzero") {
        return StopRule::LastNonzero;
    }
    throw std::runtime_error("unknown stop rule '" + name + "'");
}

std::string to_string(InitMode mode) {
    return mode == InitMode::Accumulate ? "accumulate" : "overwrite";
}

InitMode init_mode_from_string(const std::string& name) {
    if (name == "accumulate") {
        return InitMode::Accumulate;
    }
    if (name == "overwrite") {
        return InitMode::Overwrite;
    }
    throw std::runtime_error("unknown init mode '" + name + "'");
}

void Hyperparams::validate() const {
    if (beta_set.empty()) {
        throw std::runtime_error("beta set must not be empty");
    }
    for (int beta : beta_set) {
        if (beta < 2) {
            throw std::runtime_error("beta values must be >= 2");
        }
    }
    if (theta1 < 0.0 || theta2 < 0.0) {
        throw std::runtime_error("theta thresholds must be >= 0");
    }
}

int Hyperparams::min_epochs() const {
    return 2 * *beta_set.begin() + 2;
}

MaxTrace running_max_rate(std::span<const double> y_f) {
    if (y_f.size() < 2) {
        throw std::runtime_error("running max needs at least 2 epochs");
    }
    MaxTrace trace;
    trace.running_max.reserve(y_f.size());
    trace.mt.reserve(y_f.size());
    trace.running_max.push_back(y_f[0]);
    trace.mt.push_back(0.0);
    for (std::size_t e = 1; e < y_f.size(); ++e) {
        const double prev = trace.running_max.back();
        const double next = std::max(prev, y_f[e]);
        trace.running_max.push_back(next);
        trace.mt.push_back(next - prev);
    }
    return trace;
}

CompensationTrace compensation_trace(std::span<const double> mt, double theta1, double theta2,
                                     InitMode init_mode) {
    if (theta1 < 0.0 || theta2 < 0.0) {
        throw std::runtime_error("theta thresholds must be >= 0");
    }
    CompensationTrace trace;
    trace.c.reserve(mt.size());
    trace.c_raw.reserve(mt.size());
    trace.deficit.reserve(mt.size());

    double deficit = 0.0;
    for (double magnitude : mt) {
        double value = 0.0;
        if (magnitude <= theta1) {
            // Small-learning epoch: its magnitude joins the carried deficit.
            if (init_mode == InitMode::Accumulate) {
                deficit -= magnitude;
            } else {
                deficit = -magnitude;
            }
        } else {
            const double sum = magnitude + deficit;
            if (sum > 0.0) {
                value = sum;
                deficit = 0.0;
            } else {
                deficit = sum;
            }
        }
        trace.c_raw.push_back(value);
        trace.c.push_back(magnitude < theta2 ? 0.0 : value);
        trace.deficit.push_back(deficit);
    }
    return trace;
}

std::vector<Segment> segment_sums(const CompensationTrace& trace, const StopRegion& region) {
    if (region.lo > region.hi) {
        throw std::runtime_error("invalid stop region");
    }
    const int lo = std::max(region.lo, 0);
    const int hi = std::min(region.hi, static_cast<int>(trace.c.size()) - 1);

    std::vector<Segment> segments;
    int start = -1;
    double sum = 0.0;
    for (int e = lo; e <= hi; ++e) {
        const double value = trace.c[static_cast<std::size_t>(e)];
        if (value > 0.0) {
            if (start < 0) {
                start = e;
                sum = 0.0;
            }
            sum += value;
        } else if (start >= 0) {
            segments.push_back({start, e - 1, sum});
            start = -1;
        }
    }
    if (start >= 0) {
        segments.push_back({start, hi, sum});
    }
    return segments;
}

TspResult find_tsp(const TrainingRun& run, const Hyperparams& hp) {
    hp.validate();
    run.validate();
    const int epochs = run.epoch_count();
    if (epochs < hp.min_epochs()) {
        throw std::runtime_error("run too short for beta=" + std::to_string(*hp.beta_set.begin()) +
                                 ": need at least " + std::to_string(hp.min_epochs()) +
                                 " epochs, got " + std::to_string(epochs));
    }

    const std::vector<double> y_f = run.train_accuracies();

    TspResult result;
    result.region = stop_region(y_f, hp.beta_set, hp.interval_mode, hp.reduction_rule,
                                hp.region_combine);
    result.max_trace = running_max_rate(y_f);
    result.compensation = compensation_trace(result.max_trace.mt, hp.theta1, hp.theta2,
                                             hp.init_mode);
    result.segments = segment_sums(result.compensation, result.region);

    if (result.segments.empty()) {
        result.e_tsp = result.region.lo;
        result.fallback = "no positive compensation in region";
        return result;
    }

    if (hp.stop_rule == StopRule::ArgmaxSegment) {
        const Segment* best = &result.segments.front();
        for (const auto& segment : result.segments) {
            if (segment.sum > best->sum) {
                best = &segment;
            }
        }
        result.e_tsp = best->end_epoch;
    } else {
        result.e_tsp = result.segments.back().end_epoch;
    }
    return result;
}

} // namespace tsp
