#include "tsp/sim.hpp"

#include "tsp/memorization.hpp"
#include "tsp/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace tsp {

void SimConfig::validate() const {
    noise.validate();
    if (sample_count < 10) {
        throw std::runtime_error("simulation needs at least 10 samples");
    }
    if (epoch_count < 20) {
        throw std::runtime_error("simulation needs at least 20 epochs");
    }
    if (!(clean_onset.mean < noisy_onset.mean)) {
        throw std::runtime_error("clean onset mean must be below the noisy onset mean");
    }
    if (clean_onset.spread < 0.0 || noisy_onset.spread < 0.0) {
        throw std::runtime_error("onset spreads must be >= 0");
    }
    if (!(retention >= 0.0 && retention <= 1.0)) {
        throw std::runtime_error("retention must be in [0,1]");
    }
}

namespace {

double truncated_normal(Rng& rng, const OnsetSpec& onset, double lo, double hi) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        double draw = rng.normal(onset.mean, onset.spread);
        if (draw >= lo && draw <= hi) {
            return draw;
        }
    }
    return std::clamp(onset.mean, lo, hi);
}

} // namespace

SimRun simulate_run(const SimConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const std::size_t samples = cfg.sample_count;
    const int epochs = cfg.epoch_count;

    // Fixed draw order: labels, corruption sub-seed, onsets, then the
    // epoch-major correctness sweep. Changing it would change every seed.
    Rng rng(seed);
    std::vector<int> true_labels(samples);
    for (auto& label : true_labels) {
        label = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cfg.noise.class_count)));
    }
    const std::uint64_t corruption_seed = rng.next_u64();

    SimRun sim;
    sim.ledger = corrupt_labels(true_labels, cfg.noise, corruption_seed).ledger;

    std::vector<double> onset(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const OnsetSpec& spec =
            sim.ledger.entries[i].is_clean() ? cfg.clean_onset : cfg.noisy_onset;
        onset[i] = truncated_normal(rng, spec, 0.0, static_cast<double>(epochs - 1));
    }

    sim.trace.sample_ids.reserve(samples);
    for (const auto& entry : sim.ledger.entries) {
        sim.trace.sample_ids.push_back(entry.id);
    }
    sim.trace.correct.resize(static_cast<std::size_t>(epochs));
    for (int e = 0; e < epochs; ++e) {
        auto& hits = sim.trace.correct[static_cast<std::size_t>(e)];
        for (std::size_t i = 0; i < samples; ++i) {
            const double p =
                static_cast<double>(e) >= onset[i] ? cfg.retention : kBackgroundCorrectRate;
            if (rng.bernoulli(p)) {
                hits.push_back(static_cast<std::uint32_t>(i));
            }
        }
    }

    const auto counts = derive_counts(sim.trace, sim.ledger);
    const auto y_f = training_accuracy_from_counts(counts, samples);

    const std::size_t clean_count = sim.ledger.clean_count();
    const std::size_t noisy_count = sim.ledger.noisy_count();
    if (clean_count == 0) {
        throw std::runtime_error("degenerate corruption: no clean samples survived");
    }

    std::vector<double> lr_clean(static_cast<std::size_t>(epochs));
    std::vector<double> lr_noisy(static_cast<std::size_t>(epochs), 0.0);
    sim.truth.clean = noisy_count == 0;
    if (!sim.truth.clean) {
        RecallCurves curves = compute_label_recall(counts, clean_count, noisy_count);
        lr_clean = curves.lr_clean;
        lr_noisy = curves.lr_noisy;
        MemorizationStages stages = memorization_stages(curves);
        sim.truth.e_mem = stages.e_mem;
        sim.truth.e_sm = stages.e_sm;
    } else {
        for (int e = 0; e < epochs; ++e) {
            lr_clean[static_cast<std::size_t>(e)] =
                static_cast<double>(counts[static_cast<std::size_t>(e)].clean) /
                static_cast<double>(clean_count);
        }
    }

    sim.run.records.reserve(static_cast<std::size_t>(epochs));
    int best = 0;
    for (int e = 0; e < epochs; ++e) {
        const auto idx = static_cast<std::size_t>(e);
        double proxy = cfg.proxy.base + cfg.proxy.a * lr_clean[idx] - cfg.proxy.b * lr_noisy[idx];
        proxy = std::clamp(proxy, 0.0, 100.0);
        sim.run.records.push_back(EpochRecord{e, y_f[idx], proxy});
        if (proxy > *sim.run.records[static_cast<std::size_t>(best)].test_acc) {
            best = e;
        }
    }
    sim.truth.mota = best;

    sim.run.metadata["dataset"] = "sim";
    sim.run.metadata["seed"] = std::to_string(seed);
    sim.run.metadata["noise"] =
        sim.truth.clean ? "clean" : to_string(cfg.noise.kind) + " tau=" + std::to_string(cfg.noise.tau);
    sim.run.validate();
    return sim;
}

} // namespace tsp
