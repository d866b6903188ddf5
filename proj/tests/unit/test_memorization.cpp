#include "tsp/memorization.hpp"

#include "tsp/sim.hpp"

#include "doctest.h"

using namespace tsp;

namespace {

RecallCurves curves_from_ratio(std::vector<double> ratio) {
    RecallCurves curves;
    curves.ratio = std::move(ratio);
    curves.lr_clean.assign(curves.ratio.size(), 0.5);
    curves.lr_noisy.assign(curves.ratio.size(), 0.5);
    return curves;
}

} // namespace

TEST_CASE("compute_label_recall: plain division and the ratio floor") {
    std::vector<EpochCounts> counts = {{400, 400, 0}, {450, 400, 50}};
    RecallCurves curves = compute_label_recall(counts, 500, 100);
    CHECK(curves.lr_clean[0] == doctest::Approx(0.8));
    CHECK(curves.lr_noisy[0] == 0.0);
    // lr_noisy floored at 1/100
    CHECK(curves.ratio[0] == doctest::Approx(0.8 / 0.01));
    CHECK(curves.ratio[1] == doctest::Approx(0.8 / 0.5));

    CHECK_THROWS(compute_label_recall(counts, 0, 100));
    CHECK_THROWS(compute_label_recall(counts, 500, 0));
}

TEST_CASE("floor rule example: lr_clean 0.5 over zero noisy recall") {
    std::vector<EpochCounts> counts = {{50, 50, 0}, {50, 50, 0}};
    RecallCurves curves = compute_label_recall(counts, 100, 100);
    CHECK(curves.ratio[0] == doctest::Approx(50.0));
}

TEST_CASE("locate_e_mem: argmax with earliest tie") {
    CHECK(locate_e_mem(curves_from_ratio({1, 3, 2})) == 1);
    CHECK(locate_e_mem(curves_from_ratio({2, 2, 1})) == 0);
    CHECK(locate_e_mem(curves_from_ratio({1, 2, 5, 5})) == 2);
}

TEST_CASE("locate_e_mem: invariant under common positive rescaling") {
    std::vector<EpochCounts> counts;
    for (int e = 0; e < 30; ++e) {
        counts.push_back({0, (e * 13) % 17, (e * 7) % 11 + 1});
    }
    RecallCurves a = compute_label_recall(counts, 100, 50);
    RecallCurves b = a;
    for (auto& v : b.ratio) {
        v *= 3.7; // argmax unchanged
    }
    CHECK(locate_e_mem(a) == locate_e_mem(b));
}

TEST_CASE("locate_e_sm: window of strict drops") {
    RecallCurves curves = curves_from_ratio({1, 5, 4, 3, 2, 1, 1});
    CHECK(locate_e_sm(curves, 1, 3) == 2);
}

TEST_CASE("locate_e_sm: monotone ratio falls back to the last epoch") {
    RecallCurves curves = curves_from_ratio({1, 2, 3, 4, 5, 6});
    CHECK(locate_e_sm(curves, 0, 3) == 5);
}

TEST_CASE("memorization stages partition the epochs") {
    RecallCurves curves = curves_from_ratio({1, 4, 9, 7, 5, 3, 2, 2, 2, 1});
    MemorizationStages stages = memorization_stages(curves, 3);
    CHECK(stages.e_mem == 2);
    CHECK(stages.e_sm == 3);
    REQUIRE(stages.stages.size() == curves.ratio.size());
    for (int e = 0; e < curves.epoch_count(); ++e) {
        Stage expected = e < stages.e_mem   ? Stage::PreMemorization
                         : e < stages.e_sm ? Stage::MildMemorization
                                           : Stage::SevereMemorization;
        CHECK(stages.stages[static_cast<std::size_t>(e)] == expected);
    }
}

TEST_CASE("simulator runs: ratio rises then falls, e_sm >= e_mem") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        SimConfig cfg;
        SimRun sim = simulate_run(cfg, seed);
        auto counts = derive_counts(sim.trace, sim.ledger);
        RecallCurves curves =
            compute_label_recall(counts, sim.ledger.clean_count(), sim.ledger.noisy_count());

        int e_mem = locate_e_mem(curves);
        int e_sm = locate_e_sm(curves, e_mem);
        CHECK(e_sm >= e_mem);
        // clean onset at 25, noisy at 110: the peak sits between them
        CHECK(e_mem >= 10);
        CHECK(e_mem <= 90);
        // rises into the peak, decays well below it by the end
        CHECK(curves.ratio[static_cast<std::size_t>(e_mem)] > curves.ratio[2]);
        CHECK(curves.ratio.back() < 0.5 * curves.ratio[static_cast<std::size_t>(e_mem)]);
    }
}

TEST_CASE("locate_e_mem: early clean onset puts the peak between the onsets") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SimConfig cfg;
        cfg.epoch_count = 100;
        cfg.clean_onset = {20.0, 8.0};
        cfg.noisy_onset = {60.0, 12.0};
        SimRun sim = simulate_run(cfg, seed);
        auto counts = derive_counts(sim.trace, sim.ledger);
        RecallCurves curves =
            compute_label_recall(counts, sim.ledger.clean_count(), sim.ledger.noisy_count());

        // brute-force argmax oracle
        std::size_t expected = 0;
        for (std::size_t e = 1; e < curves.ratio.size(); ++e) {
            if (curves.ratio[e] > curves.ratio[expected]) {
                expected = e;
            }
        }
        int e_mem = locate_e_mem(curves);
        CHECK(e_mem == static_cast<int>(expected));
        CHECK(e_mem >= 10);
        CHECK(e_mem <= 40);
    }
}

TEST_CASE("label_precision_recall") {
    std::vector<EpochCounts> counts = {{100, 95, 5}, {0, 0, 0}, {40, 40, 0}};
    SUBCASE("plain ratios") {
        PrecisionRecall pr = label_precision_recall(counts, 0, 500);
        REQUIRE(pr.precision.has_value());
        CHECK(*pr.precision == doctest::Approx(0.95));
        CHECK(pr.recall == doctest::Approx(0.19));
    }
    SUBCASE("clean-only epoch has precision 1") {
        PrecisionRecall pr = label_precision_recall(counts, 2, 40);
        CHECK(*pr.precision == doctest::Approx(1.0));
        CHECK(pr.recall == doctest::Approx(1.0));
    }
    SUBCASE("S=0 reports precision absent") {
        PrecisionRecall pr = label_precision_recall(counts, 1, 500);
        CHECK_FALSE(pr.precision.has_value());
        CHECK(pr.recall == 0.0);
    }
    SUBCASE("S_clean is recoverable from either metric") {
        PrecisionRecall pr = label_precision_recall(counts, 0, 500);
        CHECK(*pr.precision * 100 == doctest::Approx(pr.recall * 500));
    }
}
