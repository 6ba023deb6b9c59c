#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "dlrc/random.hpp"
#include "dlrc/reservoir.hpp"
#include "oracles.hpp"

using Catch::Approx;
using namespace dlrc;

namespace {

std::vector<double> with_leading_zero(const InputSeries& u) {
    std::vector<double> out(static_cast<std::size_t>(u.length()) + 1, 0.0);
    for (int t = 1; t <= u.length(); ++t) out[static_cast<std::size_t>(t)] = u(t);
    return out;
}

}  // namespace

TEST_CASE("nonlinearities fix the origin and respect their Lipschitz constant") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (const auto& f : {Nonlinearity::tanh(), Nonlinearity::sine(),
                          Nonlinearity::scaled_tanh(2.5), Nonlinearity::scaled_tanh(0.3)}) {
        REQUIRE(f(0.0) == 0.0);
        const double L = f.lipschitz_constant();
        for (int trial = 0; trial < 2000; ++trial) {
            const double a = dist(rng);
            const double b = dist(rng);
            REQUIRE(std::abs(f(a) - f(b)) <= L * std::abs(a - b) + 1e-12);
        }
    }
    REQUIRE(Nonlinearity::tanh().lipschitz_constant() == 1.0);
    REQUIRE(Nonlinearity::sine().lipschitz_constant() == 1.0);
    REQUIRE(Nonlinearity::scaled_tanh(2.5).lipschitz_constant() == 2.5);
}

TEST_CASE("sine carries its period, the others none") {
    const auto sine = Nonlinearity::sine();
    REQUIRE(sine.period().has_value());
    REQUIRE(*sine.period() == Approx(2 * std::numbers::pi));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> dist(-20.0, 20.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double x = dist(rng);
        REQUIRE(sine(x + *sine.period()) == Approx(sine(x)).margin(1e-12));
    }
    REQUIRE_FALSE(Nonlinearity::tanh().period().has_value());
    REQUIRE_FALSE(Nonlinearity::scaled_tanh(1.5).period().has_value());
    REQUIRE(Nonlinearity::tanh().injective());
    REQUIRE_FALSE(Nonlinearity::sine().injective());
}

TEST_CASE("nonlinearity construction and parsing reject bad input") {
    REQUIRE_THROWS(Nonlinearity::scaled_tanh(0.0));
    REQUIRE_THROWS(Nonlinearity::scaled_tanh(-1.0));
    REQUIRE_THROWS(Nonlinearity::from_name("relu"));
    REQUIRE(Nonlinearity::from_name("scaled-tanh", 2.0).lipschitz_constant() == 2.0);
}

TEST_CASE("reservoir config validates its ranges") {
    REQUIRE_THROWS(ReservoirConfig(0, 0.5, 0.5, Nonlinearity::tanh()));
    REQUIRE_THROWS(ReservoirConfig(3, 0.0, 0.5, Nonlinearity::tanh()));
    REQUIRE_THROWS(ReservoirConfig(3, 1.0, 0.5, Nonlinearity::tanh()));
    REQUIRE_THROWS(ReservoirConfig(3, 0.5, 0.0, Nonlinearity::tanh()));
    REQUIRE_THROWS(ReservoirConfig(3, 0.5, 1.0, Nonlinearity::tanh()));
    const ReservoirConfig config(3, 0.5, 0.5, Nonlinearity::tanh());
    REQUIRE(config.node_count() == 4);
}

TEST_CASE("step matches the recursion by hand") {
    const ReservoirConfig config(2, 0.5, 0.5, Nonlinearity::tanh());

    SECTION("zero state and zero input stay at zero") {
        const Eigen::VectorXd next = step(Eigen::VectorXd::Zero(3), 0.0, config);
        REQUIRE(next.isZero(0.0));
    }
    SECTION("unit impulse into the zero state") {
        const Eigen::VectorXd next = step(Eigen::VectorXd::Zero(3), 1.0, config);
        REQUIRE(next(0) == Approx(std::tanh(0.5)).margin(1e-15));
        REQUIRE(next(1) == 0.0);
        REQUIRE(next(2) == 0.0);
    }
    SECTION("general delayed step shifts and feeds back the last node") {
        Eigen::VectorXd prev(3);
        prev << 0.25, -0.5, 0.75;
        const double u = -0.3;
        const Eigen::VectorXd next = step(prev, u, config);
        REQUIRE(next(0) == Approx(std::tanh(0.5 * 0.75 + 0.5 * u)).margin(1e-15));
        REQUIRE(next(1) == 0.25);
        REQUIRE(next(2) == -0.5);
    }
    SECTION("instantaneous feedback reads the shifted value, no circularity") {
        const ReservoirConfig inst(2, 0.5, 0.5, Nonlinearity::tanh(), Feedback::Instantaneous);
        Eigen::VectorXd prev(3);
        prev << 0.25, -0.5, 0.75;
        const double u = -0.3;
        const Eigen::VectorXd next = step(prev, u, inst);
        // After the shift node 2 holds prev(1); that is what alpha multiplies.
        REQUIRE(next(0) == Approx(std::tanh(0.5 * -0.5 + 0.5 * u)).margin(1e-15));
        REQUIRE(next(1) == 0.25);
        REQUIRE(next(2) == -0.5);
    }
    SECTION("wrong state size fails") {
        REQUIRE_THROWS(step(Eigen::VectorXd::Zero(2), 0.0, config));
    }
}

TEST_CASE("run reproduces the hand-unrolled recursion for N=2, u=(1,-1)") {
    const ReservoirConfig config(2, 0.5, 0.5, Nonlinearity::tanh());
    const StateTrajectory traj = run(config, InputSeries{1.0, -1.0});

    REQUIRE(traj.duration() == 2);
    REQUIRE(traj.state(0).isZero(0.0));
    REQUIRE(traj.at(0, 1) == Approx(std::tanh(0.5)).margin(1e-14));
    REQUIRE(traj.at(1, 1) == 0.0);
    REQUIRE(traj.at(2, 1) == 0.0);
    REQUIRE(traj.at(0, 2) == Approx(std::tanh(-0.5)).margin(1e-14));
    REQUIRE(traj.at(1, 2) == Approx(std::tanh(0.5)).margin(1e-14));
    REQUIRE(traj.at(2, 2) == 0.0);
}

TEST_CASE("zero input gives the zero trajectory") {
    for (const auto& f :
         {Nonlinearity::tanh(), Nonlinearity::sine(), Nonlinearity::scaled_tanh(1.8)}) {
        const ReservoirConfig config(4, 0.7, 0.3, f);
        const StateTrajectory traj = run(config, InputSeries(Eigen::VectorXd::Zero(20)));
        REQUIRE(traj.matrix().isZero(0.0));
    }
}

TEST_CASE("trajectories agree with the scalar spine oracle") {
    std::mt19937_64 rng(17);
    for (const Feedback fb : {Feedback::Delayed, Feedback::Instantaneous}) {
        for (const int N : {1, 3, 8}) {
            const ReservoirConfig config(N, 0.6, 0.4, Nonlinearity::tanh(), fb);
            for (int trial = 0; trial < 20; ++trial) {
                const InputSeries u = random_series(3 * N + 7, rng);
                const StateTrajectory traj = run(config, u);
                const auto ref =
                    oracles::reference_run(N, 0.6, 0.4, [](double x) { return std::tanh(x); },
                                           with_leading_zero(u), fb == Feedback::Instantaneous);
                for (int t = 0; t <= traj.duration(); ++t)
                    for (int k = 0; k <= N; ++k)
                        REQUIRE(traj.at(k, t) == Approx(ref.at(k, t)).margin(1e-14));
            }
        }
    }
}

TEST_CASE("shift-register identity holds exactly") {
    std::mt19937_64 rng(19);
    const ReservoirConfig config(5, 0.5, 0.5, Nonlinearity::sine());
    const StateTrajectory traj = run(config, random_series(40, rng));
    for (int t = 1; t <= traj.duration(); ++t)
        for (int k = 0; k < config.delay_length(); ++k)
            REQUIRE(traj.at(k + 1, t) == traj.at(k, t - 1));
}

TEST_CASE("early dynamics: x_0(t) = f(beta u(t)) and x_N(t) = 0 while t <= N") {
    std::mt19937_64 rng(23);
    const int N = 6;
    const ReservoirConfig config(N, 0.5, 0.25, Nonlinearity::tanh());
    const InputSeries u = random_series(3 * N, rng);
    const StateTrajectory traj = run(config, u);
    for (int t = 1; t <= N; ++t) {
        REQUIRE(traj.at(0, t) == Approx(std::tanh(0.25 * u(t))).margin(1e-14));
        REQUIRE(traj.at(N, t) == 0.0);
    }
    // The first input value reappears at the far end N steps later.
    for (int t = 1; t <= N; ++t)
        REQUIRE(traj.at(N, N + t) == Approx(std::tanh(0.25 * u(t))).margin(1e-14));
}

TEST_CASE("closed-form states on the first two delay-length intervals") {
    std::mt19937_64 rng(29);
    for (const int N : {1, 3, 8}) {
        const double alpha = 0.45;
        const double beta = 0.35;
        const ReservoirConfig config(N, alpha, beta, Nonlinearity::tanh());
        const auto f = [](double x) { return std::tanh(x); };
        for (int trial = 0; trial < 20; ++trial) {
            const InputSeries u = random_series(2 * N + 2, rng);
            const StateTrajectory traj = run(config, u);

            // 1 <= t <= N+1: x_i(t) = f(beta u(t-i)) below the diagonal, 0 on
            // and above it.
            for (int t = 1; t <= N + 1; ++t)
                for (int i = 0; i <= N; ++i) {
                    const double expected = i < t ? f(beta * u(t - i)) : 0.0;
                    REQUIRE(traj.at(i, t) == Approx(expected).margin(1e-12));
                }

            // t = N+2+i0: one feedback pass has happened for i <= i0.
            for (int i0 = 0; i0 + N + 2 <= traj.duration(); ++i0) {
                const int t = N + 2 + i0;
                for (int i = 0; i <= i0; ++i) {
                    const double expected = f(alpha * f(beta * u(t - N - i - 1)) + beta * u(t - i));
                    REQUIRE(traj.at(i, t) == Approx(expected).margin(1e-12));
                }
                for (int i = i0 + 1; i <= N; ++i)
                    REQUIRE(traj.at(i, t) == Approx(f(beta * u(t - i))).margin(1e-12));
            }
        }
    }
}

TEST_CASE("truncating the input does not change earlier states") {
    std::mt19937_64 rng(31);
    const ReservoirConfig config(4, 0.5, 0.5, Nonlinearity::tanh());
    const InputSeries u = random_series(30, rng);
    const StateTrajectory full = run(config, u);
    for (const int cut : {1, 7, 15, 29}) {
        const StateTrajectory truncated =
            run(config, InputSeries(u.values().head(cut)));
        for (int t = 0; t <= cut; ++t)
            REQUIRE(truncated.state(t) == full.state(t));
    }
}
