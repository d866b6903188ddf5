#include "tsp/training_log.hpp"

#include "tsp/rng.hpp"
#include "tsp/sim.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <algorithm>
#include <set>

using namespace tsp;

TEST_CASE("load_run: minimal valid CSV") {
    test_util::TempDir tmp;
    auto file = tmp.write("run.csv", "epoch,train_acc\n0,10.0\n1,15.0\n");
    TrainingRun run = load_run(file);
    REQUIRE(run.epoch_count() == 2);
    CHECK(run.records[0].train_acc == 10.0);
    CHECK(run.records[1].train_acc == 15.0);
    CHECK_FALSE(run.has_test_accuracies());
}

TEST_CASE("load_run: non-contiguous epochs rejected") {
    test_util::TempDir tmp;
    auto file = tmp.write("run.csv", "epoch,train_acc\n0,10.0\n2,15.0\n");
    CHECK_THROWS_WITH_AS(load_run(file), doctest::Contains("non-contiguous"), std::runtime_error);
}

TEST_CASE("load_run: accuracy out of range rejected with line number") {
    test_util::TempDir tmp;
    auto file = tmp.write("run.csv", "epoch,train_acc\n0,120.0\n1,15.0\n");
    CHECK_THROWS_WITH_AS(load_run(file), doctest::Contains(":2:"), std::runtime_error);
    CHECK_THROWS_WITH_AS(load_run(file), doctest::Contains("out of range"), std::runtime_error);
}

TEST_CASE("load_run: malformed row names the line") {
    test_util::TempDir tmp;
    auto file = tmp.write("run.csv", "epoch,train_acc\n0,10.0\n1,abc\n");
    CHECK_THROWS_WITH_AS(load_run(file), doctest::Contains(":3:"), std::runtime_error);
}

TEST_CASE("load_run: 1-based epochs are normalized and noted") {
    test_util::TempDir tmp;
    auto file = tmp.write("run.csv", "epoch,train_acc\n1,10.0\n2,15.0\n3,20.0\n");
    TrainingRun run = load_run(file);
    REQUIRE(run.epoch_count() == 3);
    CHECK(run.records.front().epoch == 0);
    CHECK(run.metadata.at("epoch_base") == "1");
}

TEST_CASE("load_run: fractional scale rejected unless rescaling requested") {
    test_util::TempDir tmp;
    auto file = tmp.write("run.csv", "epoch,train_acc\n0,0.10\n1,0.95\n");
    CHECK_THROWS_WITH_AS(load_run(file), doctest::Contains("fractional"), std::runtime_error);
    LoadOptions opts;
    opts.rescale_fractional = true;
    TrainingRun run = load_run(file, opts);
    CHECK(run.records[1].train_acc == doctest::Approx(95.0));
    CHECK(run.metadata.count("rescaled_from_fraction") == 1);
}

TEST_CASE("load_run: JSON input") {
    test_util::TempDir tmp;
    auto file = tmp.write("run.json", R"({"metadata":{"arch":"cnn9"},
        "records":[{"epoch":0,"train_acc":10.0,"test_acc":40.0},
                   {"epoch":1,"train_acc":20.0}]})");
    TrainingRun run = load_run(file);
    REQUIRE(run.epoch_count() == 2);
    CHECK(run.records[0].test_acc == 40.0);
    CHECK_FALSE(run.records[1].test_acc.has_value());
    CHECK(run.metadata.at("arch") == "cnn9");
}

TEST_CASE("round-trip: canonical CSV reproduces numeric content bit-exactly") {
    test_util::TempDir tmp;
    Rng rng(42);
    TrainingRun run;
    for (int e = 0; e < 50; ++e) {
        EpochRecord rec;
        rec.epoch = e;
        rec.train_acc = 100.0 * rng.uniform();
        if (e % 3 != 0) {
            rec.test_acc = 100.0 * rng.uniform();
        }
        run.records.push_back(rec);
    }
    auto file = tmp.path() / "run.csv";
    write_run(run, file);
    TrainingRun reloaded = load_run(file);
    REQUIRE(reloaded.epoch_count() == run.epoch_count());
    for (int e = 0; e < run.epoch_count(); ++e) {
        const auto idx = static_cast<std::size_t>(e);
        CHECK(reloaded.records[idx].train_acc == run.records[idx].train_acc);
        CHECK(reloaded.records[idx].test_acc == run.records[idx].test_acc);
    }
    // And the file itself is a fixed point.
    write_run(reloaded, tmp.path() / "run2.csv");
    CHECK(test_util::read_file(file) == test_util::read_file(tmp.path() / "run2.csv"));
}

TEST_CASE("derive_counts: direct tallies") {
    SampleLedger ledger;
    ledger.class_count = 2;
    ledger.entries = {{"a", 0, 0}, {"b", 1, 0}}; // a clean, b noisy
    PredictionTrace trace;
    trace.sample_ids = {"a", "b"};
    trace.correct = {{0, 1}, {}};

    auto counts = derive_counts(trace, ledger);
    REQUIRE(counts.size() == 2);
    CHECK(counts[0].total == 2);
    CHECK(counts[0].clean == 1);
    CHECK(counts[0].noisy == 1);
    CHECK(counts[1].total == 0);
    CHECK(counts[1].clean == 0);
    CHECK(counts[1].noisy == 0);
}

TEST_CASE("derive_counts: unknown sample id rejected") {
    SampleLedger ledger;
    ledger.class_count = 2;
    ledger.entries = {{"a", 0, 0}};
    PredictionTrace trace;
    trace.sample_ids = {"zz"};
    trace.correct = {{0}};
    CHECK_THROWS_WITH_AS(derive_counts(trace, ledger), doctest::Contains("unknown sample_id"),
                         std::runtime_error);
}

TEST_CASE("derive_counts: ledger without true labels rejected") {
    SampleLedger ledger;
    ledger.class_count = 2;
    ledger.entries = {{"a", 0, std::nullopt}};
    PredictionTrace trace;
    trace.sample_ids = {"a"};
    trace.correct = {{0}};
    CHECK_THROWS(derive_counts(trace, ledger));
}

TEST_CASE("derive_counts: matches a naive recount of simulator output") {
    SimConfig cfg;
    cfg.sample_count = 1000;
    cfg.epoch_count = 40;
    cfg.clean_onset = {8.0, 3.0};
    cfg.noisy_onset = {25.0, 6.0};
    SimRun sim = simulate_run(cfg, 7);

    auto counts = derive_counts(sim.trace, sim.ledger);

    // Naive oracle: rebuild the tallies per epoch from the raw id strings.
    auto idx = sim.ledger.index();
    for (int e = 0; e < cfg.epoch_count; ++e) {
        std::int64_t total = 0, clean = 0, noisy = 0;
        for (std::uint32_t s : sim.trace.correct[static_cast<std::size_t>(e)]) {
            const auto& entry = sim.ledger.entries[idx.at(sim.trace.sample_ids[s])];
            ++total;
            if (entry.is_clean()) {
                ++clean;
            } else {
                ++noisy;
            }
        }
        CHECK(counts[static_cast<std::size_t>(e)].total == total);
        CHECK(counts[static_cast<std::size_t>(e)].clean == clean);
        CHECK(counts[static_cast<std::size_t>(e)].noisy == noisy);
    }

    // Bounds against the ledger totals.
    for (const auto& c : counts) {
        CHECK(c.clean <= static_cast<std::int64_t>(sim.ledger.clean_count()));
        CHECK(c.noisy <= static_cast<std::int64_t>(sim.ledger.noisy_count()));
        CHECK(c.total == c.clean + c.noisy);
    }
}

TEST_CASE("derive_counts: invariant under sample permutation") {
    SampleLedger ledger;
    ledger.class_count = 3;
    for (int i = 0; i < 30; ++i) {
        ledger.entries.push_back({std::to_string(i), i % 3, (i % 5 == 0) ? (i + 1) % 3 : i % 3});
    }
    PredictionTrace trace;
    for (int i = 0; i < 30; ++i) {
        trace.sample_ids.push_back(std::to_string(i));
    }
    trace.correct = {{0, 3, 7, 12, 25}, {1, 2, 3, 4, 5, 6}};

    auto baseline = derive_counts(trace, ledger);

    PredictionTrace shuffled = trace;
    std::mt19937 gen(3);
    std::shuffle(shuffled.correct[0].begin(), shuffled.correct[0].end(), gen);
    std::shuffle(shuffled.correct[1].begin(), shuffled.correct[1].end(), gen);
    std::reverse(ledger.entries.begin(), ledger.entries.end());

    auto permuted = derive_counts(shuffled, ledger);
    for (std::size_t e = 0; e < baseline.size(); ++e) {
        CHECK(baseline[e].total == permuted[e].total);
        CHECK(baseline[e].clean == permuted[e].clean);
        CHECK(baseline[e].noisy == permuted[e].noisy);
    }
}

TEST_CASE("training_accuracy_from_counts") {
    std::vector<EpochCounts> counts = {{500, 0, 0}, {1000, 0, 0}, {333, 0, 0}};
    SUBCASE("half right") {
        auto y = training_accuracy_from_counts(counts, 1000);
        CHECK(y[0] == 50.0);
        CHECK(y[1] == 100.0);
    }
    SUBCASE("exact rational") {
        auto y = training_accuracy_from_counts(std::span(counts).subspan(2), 999);
        CHECK(y[0] == doctest::Approx(100.0 * 333.0 / 999.0).epsilon(1e-9));
    }
    SUBCASE("zero samples rejected") {
        CHECK_THROWS(training_accuracy_from_counts(counts, 0));
    }
}

TEST_CASE("ledger CSV round trip and validation") {
    test_util::TempDir tmp;
    auto file = tmp.write("ledger.csv", "sample_id,observed_label,true_label\na,0,0\nb,1,0\nc,1,\n");
    SampleLedger ledger = load_ledger(file);
    REQUIRE(ledger.size() == 3);
    CHECK(ledger.entries[0].is_clean());
    CHECK_FALSE(ledger.entries[1].is_clean());
    CHECK_FALSE(ledger.entries[2].true_label.has_value());
    CHECK(ledger.class_count == 2);
    CHECK_FALSE(ledger.has_true_labels());

    auto dup = tmp.write("dup.csv", "sample_id,observed_label\na,0\na,1\n");
    CHECK_THROWS_WITH_AS(load_ledger(dup), doctest::Contains("duplicate"), std::runtime_error);
}

TEST_CASE("trace CSV: correct and predicted_label variants agree") {
    test_util::TempDir tmp;
    auto ledger_file = tmp.write("ledger.csv", "sample_id,observed_label,true_label\n"
                                               "a,0,0\nb,1,0\nc,2,2\n");
    SampleLedger ledger = load_ledger(ledger_file);

    auto by_flag = tmp.write("t1.csv", "epoch,sample_id,correct\n0,a,1\n0,b,0\n1,b,1\n1,c,1\n");
    auto by_label = tmp.write("t2.csv", "epoch,sample_id,predicted_label\n"
                                        "0,a,0\n0,b,0\n1,b,1\n1,c,2\n");
    PredictionTrace t1 = load_trace(by_flag);
    PredictionTrace t2 = load_trace(by_label, &ledger);

    auto c1 = derive_counts(t1, ledger);
    auto c2 = derive_counts(t2, ledger);
    REQUIRE(c1.size() == c2.size());
    for (std::size_t e = 0; e < c1.size(); ++e) {
        CHECK(c1[e].total == c2[e].total);
        CHECK(c1[e].clean == c2[e].clean);
        CHECK(c1[e].noisy == c2[e].noisy);
    }

    CHECK_THROWS_WITH_AS(load_trace(by_label), doctest::Contains("needs a ledger"),
                         std::runtime_error);
}

TEST_CASE("trace CSV: duplicate rows collapse") {
    test_util::TempDir tmp;
    auto file = tmp.write("t.csv", "epoch,sample_id,correct\n0,a,1\n0,a,1\n1,a,1\n");
    PredictionTrace trace = load_trace(file);
    CHECK(trace.correct[0].size() == 1);
    CHECK(trace.correct[1].size() == 1);
}
