#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "qosc/model.hpp"

using namespace qosc;
using Catch::Approx;

TEST_CASE("mean_field_rhs matches direct substitution") {
    const OscillatorParams params{1.0, 1.0};

    SECTION("heating drift example") {
        const auto d = mean_field_rhs(MeanState{0.5, 1.0, 0.0}, ControlInput{0.0, 0.5}, params);
        CHECK(d.E == Approx(0.0).margin(1e-15));
        CHECK(d.Q == Approx(-1.0));
        CHECK(d.P == Approx(-1.0));
    }
    SECTION("closed-system equilibrium") {
        const double e_star = 1.3;
        const auto d = mean_field_rhs(MeanState{e_star, 0.0, 0.0},
                                      ControlInput{0.0, e_star / params.omega0}, params);
        CHECK(d.E == Approx(0.0).margin(1e-15));
        CHECK(d.Q == Approx(0.0).margin(1e-15));
        CHECK(d.P == Approx(0.0).margin(1e-15));
    }
    SECTION("driven example") {
        const auto d = mean_field_rhs(MeanState{0.2, 0.0, 0.4}, ControlInput{1.0, 0.0}, params);
        CHECK(d.E == Approx(-0.8));
        CHECK(d.Q == Approx(0.4));
        CHECK(d.P == Approx(-1.4));
    }
    SECTION("non-finite input rejected") {
        CHECK_THROWS_AS(mean_field_rhs(MeanState{std::nan(""), 0.0, 0.0},
                                       ControlInput{}, params),
                        std::invalid_argument);
        CHECK_THROWS_AS(mean_field_rhs(MeanState{},
                                       ControlInput{std::numeric_limits<double>::infinity(), 0.0},
                                       params),
                        std::invalid_argument);
    }
}

TEST_CASE("energy relaxes toward omega0 n when undriven") {
    const OscillatorParams params{1.7, 0.4};
    const double n = 0.9;
    const auto d = mean_field_rhs(MeanState{params.omega0 * n, 0.3, -0.2},
                                  ControlInput{0.0, n}, params);
    CHECK(d.E == Approx(0.0).margin(1e-14));
}

TEST_CASE("(Q,P) subsystem is linear with the expected drift matrix") {
    const OscillatorParams params{1.3, 0.7};
    const double u = 0.25;

    // Extract A and B by evaluating the rhs on basis vectors, X = (P, Q).
    auto pq_rates = [&](double p, double q, double drive) {
        const auto d = mean_field_rhs(MeanState{0.0, q, p}, ControlInput{drive, 0.0}, params);
        return std::pair{d.P, d.Q};
    };
    const auto [a11, a21] = pq_rates(1.0, 0.0, 0.0);
    const auto [a12, a22] = pq_rates(0.0, 1.0, 0.0);
    const auto [b1, b2] = pq_rates(0.0, 0.0, 1.0);

    CHECK(a11 == Approx(-params.gamma));
    CHECK(a12 == Approx(-params.omega0 * params.omega0));
    CHECK(a21 == Approx(1.0));
    CHECK(a22 == Approx(-params.gamma));
    CHECK(b1 == Approx(-1.0));
    CHECK(b2 == Approx(0.0).margin(1e-15));

    // Superposition on random points.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double p = dist(rng), q = dist(rng);
        const auto [dp, dq] = pq_rates(p, q, u);
        CHECK(dp == Approx(a11 * p + a12 * q + b1 * u).margin(1e-12));
        CHECK(dq == Approx(a21 * p + a22 * q + b2 * u).margin(1e-12));
    }

    // Eigenvalues of A have real part exactly -gamma.
    Eigen::Matrix2d a;
    a << a11, a12, a21, a22;
    const auto eigs = Eigen::EigenSolver<Eigen::Matrix2d>(a).eigenvalues();
    for (int i = 0; i < 2; ++i) CHECK(eigs(i).real() == Approx(-params.gamma).margin(1e-12));
}

TEST_CASE("objective") {
    CHECK(objective(1.8, 1.8) == 0.0);
    CHECK(objective(0.8, 0.3) == Approx(0.125));
    CHECK(objective(0.0, 1.0) == Approx(0.5));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double a = dist(rng), b = dist(rng);
        CHECK(objective(a, b) == objective(b, a));
        CHECK(objective(a, b) >= 0.0);
    }
}

TEST_CASE("n_from_temperature") {
    CHECK(n_from_temperature(1e6, 1.0) == Approx(0.0).margin(1e-12));
    CHECK(n_from_temperature(std::log(2.0), 1.0) == Approx(1.0));
    CHECK(n_from_temperature(1.0, 1.0) == Approx(1.0 / (std::exp(1.0) - 1.0)));
    CHECK_THROWS_AS(n_from_temperature(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(n_from_temperature(-0.5, 1.0), std::domain_error);

    // Strictly decreasing in beta.
    double prev = n_from_temperature(0.05, 1.3);
    for (double beta = 0.1; beta < 5.0; beta += 0.05) {
        const double cur = n_from_temperature(beta, 1.3);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("target fixes the equilibrium controls") {
    const OscillatorParams params{2.0, 1.0};
    const Target t = Target::for_energy(1.8, params);
    CHECK(t.e_star == 1.8);
    CHECK(t.n_star == 0.9);
    CHECK(t.u_star == 0.0);
    CHECK_THROWS_AS(Target::for_energy(-0.1, params), std::invalid_argument);
}

TEST_CASE("control physicality flag") {
    CHECK(ControlInput{0.4, 0.0}.physical());
    CHECK(ControlInput{-2.0, 1.5}.physical());
    CHECK_FALSE(ControlInput{0.0, -1e-9}.physical());
}
