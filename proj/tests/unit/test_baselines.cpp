#include "tsp/baselines.hpp"

#include "tsp/rng.hpp"

#include "doctest.h"

#include <optional>
#include <vector>

using namespace tsp;

TEST_CASE("nha_point: first crossing of 100*(1-tau)") {
    // Crosses 50 first at epoch 7.
    std::vector<double> y = {5, 12, 20, 28, 35, 41, 47, 53, 60, 66};
    BaselineResult r = nha_point(y, 0.5);
    CHECK(r.found);
    CHECK(r.epoch == 7);

    // Linear-scan oracle.
    int expected = -1;
    for (std::size_t e = 0; e < y.size(); ++e) {
        if (y[e] >= 50.0) {
            expected = static_cast<int>(e);
            break;
        }
    }
    CHECK(r.epoch == expected);
}

TEST_CASE("nha_point: never reached") {
    std::vector<double> y = {10, 50, 90, 99.5};
    BaselineResult r = nha_point(y, 0.0);
    CHECK_FALSE(r.found);
}

TEST_CASE("nha_point: immediate crossing at epoch 0") {
    std::vector<double> y = {85, 90, 95};
    BaselineResult r = nha_point(y, 0.2);
    CHECK(r.found);
    CHECK(r.epoch == 0);
}

TEST_CASE("nha_point: exact threshold counts as reached") {
    std::vector<double> y = {10, 80, 90};
    CHECK(nha_point(y, 0.2).epoch == 1);
}

TEST_CASE("nha_point: monotone in tau") {
    Rng rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> y;
        double value = 5.0;
        for (int e = 0; e < 100; ++e) {
            y.push_back(value);
            value = std::min(value + 2.0 * rng.uniform(), 100.0);
        }
        int previous = y.size(); // sentinel beyond the end
        for (double tau : {0.1, 0.3, 0.5, 0.7}) {
            BaselineResult r = nha_point(y, tau);
            int epoch = r.found ? r.epoch : static_cast<int>(y.size());
            CHECK(epoch <= previous);
            previous = epoch;
        }
    }
}

TEST_CASE("nha_point: invalid tau rejected") {
    std::vector<double> y = {10, 20};
    CHECK_THROWS(nha_point(y, 1.0));
    CHECK_THROWS(nha_point(y, -0.2));
}

TEST_CASE("mota_point: earliest argmax") {
    std::vector<std::optional<double>> a = {50.0, 60.0, 55.0};
    CHECK(mota_point(a).epoch == 1);
    std::vector<std::optional<double>> b = {60.0, 60.0, 55.0};
    CHECK(mota_point(b).epoch == 0);
}

TEST_CASE("mota_point: missing values skipped, all-missing not found") {
    std::vector<std::optional<double>> sparse = {std::nullopt, 40.0, std::nullopt, 70.0, 50.0};
    BaselineResult r = mota_point(sparse);
    CHECK(r.found);
    CHECK(r.epoch == 3);

    std::vector<std::optional<double>> none(4, std::nullopt);
    CHECK_FALSE(mota_point(none).found);
}

TEST_CASE("mota_point: maximizes over every epoch") {
    Rng rng(62);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::optional<double>> test_acc;
        for (int e = 0; e < 60; ++e) {
            test_acc.push_back(100.0 * rng.uniform());
        }
        BaselineResult r = mota_point(test_acc);
        REQUIRE(r.found);
        for (const auto& v : test_acc) {
            CHECK(*test_acc[static_cast<std::size_t>(r.epoch)] >= *v);
        }
    }
}

TEST_CASE("standard_point: final epoch") {
    CHECK(standard_point(200).epoch == 199);
    CHECK(standard_point(2).epoch == 1);
    CHECK_THROWS(standard_point(0));
}
