#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qrd/core.hpp"
#include "qrd/recurrence.hpp"
#include "qrd/sweep.hpp"

using namespace qrd;

TEST_CASE("step arithmetic") {
    CHECK(step(1.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(step(2.0, 2.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));  // fixed point
    CHECK(step(1.0, 2.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("initial conditions validation") {
    CHECK_THROWS_AS(InitialConditions({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(InitialConditions({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(InitialConditions({1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(IterationGuard(0), std::invalid_argument);
    CHECK_THROWS_AS(IterationGuard(10, 0.5, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(simulate(NormalizedParameters(1.0, 2), InitialConditions({1.0, 1.0}),
                             IterationGuard(5)),
                    std::invalid_argument);
}

TEST_CASE("equilibrium orbit stays put") {
    const Trajectory traj = simulate(NormalizedParameters(2.0, 1), InitialConditions({2.0, 2.0}),
                                     IterationGuard(10));
    REQUIRE(traj.status == TrajectoryStatus::Completed);
    REQUIRE(traj.values.size() == 10);
    for (double v : traj.values) CHECK(std::abs(v - 2.0) <= 1e-12);
}

TEST_CASE("hand iteration, p = 1, m = 1") {
    // y_{n+1} = 1 + y_{n-1} / y_n^2 from (1, 1), iterated by hand:
    // y1 = 1 + 1/1          = 2
    // y2 = 1 + 1/4          = 1.25
    // y3 = 1 + 2/1.5625     = 2.28
    // y4 = 1 + 1.25/2.28^2  = 1.2404586026469683
    // y5 = 1 + 2.28/y4^2    = 2.4817341707071430
    // y6 = 1 + y4/y5^2      = 1.2014056985742144
    const Trajectory traj = simulate(NormalizedParameters(1.0, 1), InitialConditions({1.0, 1.0}),
                                     IterationGuard(6));
    REQUIRE(traj.values.size() == 6);
    const std::vector<double> expected{2.0, 1.25, 2.28, 1.2404586026469683,
                                       2.4817341707071430, 1.2014056985742144};
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(std::abs(traj.values[i] - expected[i]) <= 1e-12);
}

TEST_CASE("global-stability regime converges from random initials") {
    SplitMix64 rng(7151);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> init(3);
        for (double& v : init) v = rng.uniform(0.5, 5.0);
        const Trajectory traj = simulate(NormalizedParameters(0.3, 2), InitialConditions(init),
                                         IterationGuard(500));
        REQUIRE(traj.status == TrajectoryStatus::Completed);
        const double y_bar = equilibrium(0.3).y_bar;
        CHECK(std::abs(traj.values.back() - y_bar) <= 1e-6);
    }
}

TEST_CASE("iterates exceed one") {
    SplitMix64 rng(99);
    for (double p : {0.2, 0.8}) {
        std::vector<double> init(4);
        for (double& v : init) v = rng.uniform(0.1, 6.0);  // initials may dip below 1
        const Trajectory traj = simulate(NormalizedParameters(p, 3), InitialConditions(init),
                                         IterationGuard(200));
        REQUIRE(traj.status == TrajectoryStatus::Completed);
        for (double v : traj.values) CHECK(v > 1.0);
    }
    // far outside the stable range the orbit swings so wide that the
    // increment p y_{n-m} / y_n^2 can round to zero; >= is all that survives
    // double precision there
    std::vector<double> init(4);
    for (double& v : init) v = rng.uniform(0.1, 6.0);
    const Trajectory wild = simulate(NormalizedParameters(3.0, 3), InitialConditions(init),
                                     IterationGuard(200));
    REQUIRE(wild.status == TrajectoryStatus::Completed);
    for (double v : wild.values) CHECK(v >= 1.0);
}

TEST_CASE("determinism: identical runs are bit-identical") {
    const InitialConditions init({1.7, 0.9, 2.4});
    const Trajectory a = simulate(NormalizedParameters(0.6, 2), init, IterationGuard(300));
    const Trajectory b = simulate(NormalizedParameters(0.6, 2), init, IterationGuard(300));
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("x-form matches the normalized orbit") {
    // A = 1 reduces to the y-form outright
    const std::vector<double> init{1.3, 0.8};
    const Trajectory x1 = simulate_x_form(Parameters(1.0, 0.7, 1), init, IterationGuard(50));
    const Trajectory y1 = simulate(NormalizedParameters(0.7, 1), InitialConditions(init),
                                   IterationGuard(50));
    for (std::size_t i = 0; i < 50; ++i) CHECK(x1.values[i] == y1.values[i]);

    // scaling consistency: x-orbit from A * y_init equals A * y-orbit
    const double A = 2.5, B = 3.0;
    const NormalizedParameters np = normalize(Parameters(A, B, 2));
    const std::vector<double> y_init{1.1, 2.0, 0.7};
    std::vector<double> x_init;
    for (double v : y_init) x_init.push_back(A * v);
    const Trajectory x = simulate_x_form(Parameters(A, B, 2), x_init, IterationGuard(200));
    const Trajectory y = simulate(np, InitialConditions(y_init), IterationGuard(200));
    REQUIRE(x.values.size() == y.values.size());
    for (std::size_t i = 0; i < x.values.size(); ++i)
        CHECK(std::abs(x.values[i] - A * y.values[i]) <= 1e-12 * std::abs(x.values[i]));
}

TEST_CASE("x-form fixed point") {
    // A=2, B=8 gives p=2, ybar=2, so x_bar = A*ybar = 4
    const Trajectory traj = simulate_x_form(Parameters(2.0, 8.0, 1), {4.0, 4.0},
                                            IterationGuard(20));
    for (double v : traj.values) CHECK(std::abs(v - 4.0) <= 1e-12);
}

TEST_CASE("fixed-point persistence at machine precision") {
    for (double p : {0.3, 1.0, 5.0}) {
        const double y_bar = equilibrium(p).y_bar;
        const Trajectory traj = simulate(NormalizedParameters(p, 2),
                                         InitialConditions({y_bar, y_bar, y_bar}),
                                         IterationGuard(1000));
        REQUIRE(traj.status == TrajectoryStatus::Completed);
        for (double v : traj.values) CHECK(std::abs(v - y_bar) <= 1e-12);
    }
}

TEST_CASE("guard trips are encoded in the status") {
    // tiny overflow bound forces an early stop
    const Trajectory traj = simulate(NormalizedParameters(5.0, 1), InitialConditions({0.5, 4.9}),
                                     IterationGuard(100, 4.0, 1e-150));
    CHECK(traj.status == TrajectoryStatus::Overflowed);
    CHECK(traj.failed_step >= 1);
    CHECK(traj.values.size() == traj.failed_step - 1);

    const Trajectory under = simulate(NormalizedParameters(0.5, 1),
                                      InitialConditions({1.0, 1e-160}), IterationGuard(100));
    CHECK(under.status == TrajectoryStatus::Underflowed);
    CHECK(under.failed_step == 1);
}

TEST_CASE("trajectory indexing covers the initial segment") {
    const Trajectory traj = simulate(NormalizedParameters(0.5, 2), InitialConditions({3.0, 4.0, 5.0}),
                                     IterationGuard(5));
    CHECK(traj.at(-2) == 3.0);
    CHECK(traj.at(-1) == 4.0);
    CHECK(traj.at(0) == 5.0);
    CHECK(traj.at(1) == traj.values[0]);
    CHECK(traj.at(5) == traj.values[4]);
    CHECK_THROWS_AS(traj.at(-3), std::out_of_range);
    CHECK_THROWS_AS(traj.at(6), std::out_of_range);
}

TEST_CASE("comparison iteration") {
    SUBCASE("hand values for p = 0.5, m = 1") {
        const std::vector<double> u = comparison_simulate(0.5, 1, {1.0, 1.0}, 5);
        const std::vector<double> expected{1.5, 1.5, 1.75, 1.75, 1.875};
        REQUIRE(u.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) CHECK(u[i] == doctest::Approx(expected[i]).epsilon(1e-15));
    }
    SUBCASE("equilibrium initial data stays constant") {
        const double u_bar = comparison_equilibrium(0.25);
        const std::vector<double> u = comparison_simulate(0.25, 2, {u_bar, u_bar, u_bar}, 50);
        for (double v : u) CHECK(std::abs(v - u_bar) <= 1e-12);
    }
    SUBCASE("tail converges to 1/(1-p)") {
        const std::vector<double> u = comparison_simulate(0.5, 1, {0.3, 7.0}, 200);
        CHECK(std::abs(u.back() - 2.0) <= 1e-9);
    }
    SUBCASE("rejects p outside (0,1)") {
        CHECK_THROWS_AS(comparison_simulate(1.0, 1, {1.0, 1.0}, 5), std::invalid_argument);
        CHECK_THROWS_AS(comparison_simulate(-0.1, 1, {1.0, 1.0}, 5), std::invalid_argument);
        CHECK_THROWS_AS(comparison_simulate(0.5, 1, {1.0, 1.0, 1.0}, 5), std::invalid_argument);
    }
}
