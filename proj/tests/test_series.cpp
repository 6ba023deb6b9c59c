#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dlrc/random.hpp"
#include "dlrc/series.hpp"

using Catch::Approx;
using namespace dlrc;

TEST_CASE("InputSeries treats t = 0 as zero and bounds-checks the rest") {
    const InputSeries u{1.0, 2.0, 3.0};
    REQUIRE(u(0) == 0.0);
    REQUIRE(u(1) == 1.0);
    REQUIRE(u(3) == 3.0);
    REQUIRE(u.length() == 3);
    REQUIRE_THROWS_AS(u(4), std::out_of_range);
    REQUIRE_THROWS_AS(u(-1), std::out_of_range);
}

TEST_CASE("pad_inputs extends to the maximum length with zeros") {
    SECTION("two series") {
        const InputBatch padded = pad_inputs({{InputSeries{1.0, 2.0}, InputSeries{3.0}}, 0});
        REQUIRE(padded.padded_length == 2);
        REQUIRE(padded.inputs[0] == InputSeries{1.0, 2.0});
        REQUIRE(padded.inputs[1] == InputSeries{3.0, 0.0});
    }
    SECTION("single series is untouched") {
        const InputBatch padded = pad_inputs({{InputSeries{5.0}}, 0});
        REQUIRE(padded.padded_length == 1);
        REQUIRE(padded.inputs[0] == InputSeries{5.0});
    }
    SECTION("three ragged series") {
        const InputBatch padded =
            pad_inputs({{InputSeries{1.0, 2.0, 3.0}, InputSeries{4.0}, InputSeries{5.0, 6.0}}, 0});
        REQUIRE(padded.inputs[0] == InputSeries{1.0, 2.0, 3.0});
        REQUIRE(padded.inputs[1] == InputSeries{4.0, 0.0, 0.0});
        REQUIRE(padded.inputs[2] == InputSeries{5.0, 6.0, 0.0});
    }
    SECTION("empty batch fails") {
        REQUIRE_THROWS_WITH(pad_inputs({{}, 0}), "no inputs");
    }
    SECTION("original entries unchanged on random batches") {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<int> len(1, 12);
        for (int trial = 0; trial < 50; ++trial) {
            InputBatch batch;
            for (int i = 0; i < 5; ++i) batch.inputs.push_back(random_series(len(rng), rng));
            const InputBatch padded = pad_inputs(batch);
            for (std::size_t i = 0; i < batch.inputs.size(); ++i) {
                REQUIRE(padded.inputs[i].length() == padded.padded_length);
                for (int t = 1; t <= batch.inputs[i].length(); ++t)
                    REQUIRE(padded.inputs[i](t) == batch.inputs[i](t));
                for (int t = batch.inputs[i].length() + 1; t <= padded.padded_length; ++t)
                    REQUIRE(padded.inputs[i](t) == 0.0);
            }
        }
    }
}

TEST_CASE("normalize_input rescales to unit norm") {
    const InputSeries u = normalize_input(InputSeries{3.0, 4.0});
    REQUIRE(u(1) == Approx(0.6).margin(1e-15));
    REQUIRE(u(2) == Approx(0.8).margin(1e-15));
    REQUIRE(normalize_input(InputSeries{1.0}) == InputSeries{1.0});
    REQUIRE(normalize_input(InputSeries{2.0, 2.0, 2.0, 2.0}) ==
            InputSeries{0.5, 0.5, 0.5, 0.5});

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const InputSeries v = normalize_input(random_series(8, rng));
        REQUIRE(v.values().norm() == Approx(1.0).margin(1e-12));
    }

    REQUIRE_THROWS_WITH(normalize_input(InputSeries{0.0, 0.0}), "cannot normalize zero series");
}

TEST_CASE("apply_mask multiplies by the mask repeated over time") {
    Eigen::VectorXd mask(2);
    mask << 2.0, 3.0;
    REQUIRE(apply_mask(InputSeries{1.0, 1.0, 1.0, 1.0}, mask) == InputSeries{2.0, 3.0, 2.0, 3.0});

    Eigen::VectorXd identity(1);
    identity << 1.0;
    const InputSeries u{0.5, -0.25, 4.0};
    REQUIRE(apply_mask(u, identity) == u);

    Eigen::VectorXd zero_five(2);
    zero_five << 0.0, 5.0;
    REQUIRE(apply_mask(InputSeries{1.0, 2.0}, zero_five) == InputSeries{0.0, 10.0});

    REQUIRE_THROWS_WITH(apply_mask(u, Eigen::VectorXd()), "empty mask");
}

TEST_CASE("pad_to pads a single series") {
    REQUIRE(pad_to(InputSeries{1.0}, 3) == InputSeries{1.0, 0.0, 0.0});
    REQUIRE_THROWS(pad_to(InputSeries{1.0, 2.0}, 1));
}
