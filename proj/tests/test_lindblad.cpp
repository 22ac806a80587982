#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qosc/lindblad.hpp"
#include "qosc/scenarios.hpp"

using namespace qosc;
using Catch::Approx;

namespace {

// Textbook GKSL right-hand side written with dense operator products;
// independent of the ladder-index implementation under test.
CMatrix dense_lindblad(const CMatrix& rho, double u, double n, const FockOperators& ops,
                       const OscillatorParams& params) {
    const Cplx i(0.0, 1.0);
    const CMatrix h = ops.h0 + u * ops.position;
    const CMatrix& a = ops.annihilate;
    const CMatrix& ad = ops.create;
    const CMatrix nn = ad * a;
    const CMatrix mm = a * ad;
    CMatrix out = -i * (h * rho - rho * h);
    out += params.gamma * (n + 1.0) * (2.0 * a * rho * ad - nn * rho - rho * nn);
    out += params.gamma * n * (2.0 * ad * rho * a - mm * rho - rho * mm);
    return out;
}

double expect_number(const CMatrix& rho) {
    double v = 0.0;
    for (int j = 0; j < rho.rows(); ++j) v += j * rho(j, j).real();
    return v;
}

} // namespace

TEST_CASE("build_operators") {
    const auto ops = build_operators(2, 1.0);
    CHECK(ops.annihilate(0, 1) == Cplx(1.0, 0.0));
    CHECK(ops.annihilate(1, 0) == Cplx(0.0, 0.0));
    CHECK(ops.number(1, 1) == Cplx(1.0, 0.0));

    const auto big = build_operators(12, 2.0);
    for (int k = 0; k + 1 < 12; ++k)
        CHECK(big.position(k, k + 1).real() ==
              Approx(std::sqrt((k + 1) / (2.0 * 2.0))));

    // Canonical commutator holds away from the truncation corner.
    const CMatrix comm = big.position * big.momentum - big.momentum * big.position;
    for (int j = 0; j < 10; ++j)
        for (int k = 0; k < 10; ++k) {
            const Cplx expect = (j == k) ? Cplx(0.0, 1.0) : Cplx(0.0, 0.0);
            CHECK(std::abs(comm(j, k) - expect) < 1e-12);
        }

    CHECK_THROWS_AS(build_operators(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_operators(10, 0.0), std::invalid_argument);
}

TEST_CASE("displaced_thermal_state") {
    SECTION("vacuum") {
        const auto rho = displaced_thermal_state(20, 0.0, 0.0, 0.0, 1.0);
        CHECK(rho.rho(0, 0).real() == Approx(1.0));
        CHECK(rho.trace_error() < 1e-12);
        CHECK(rho.min_eigenvalue() > -1e-12);
    }
    SECTION("pure coherent state at the floor") {
        const int dim = 30;
        const auto ops = build_operators(dim, 1.0);
        const auto rho = displaced_thermal_state(dim, 1.0, 0.0, 0.5, 1.0);
        CHECK(expect_number(rho.rho) == Approx(0.5).margin(1e-8));
        const Cplx q = (ops.position * rho.rho).trace();
        const Cplx p = (ops.momentum * rho.rho).trace();
        CHECK(q.real() == Approx(1.0).margin(1e-8));
        CHECK(p.real() == Approx(0.0).margin(1e-8));
        // Purity of a displaced vacuum.
        CHECK((rho.rho * rho.rho).trace().real() == Approx(1.0).margin(1e-8));
    }
    SECTION("displaced thermal mixture") {
        const int dim = 40;
        const auto ops = build_operators(dim, 1.0);
        const auto rho = displaced_thermal_state(dim, 1.0, -0.4, 0.9, 1.0);
        CHECK(expect_number(rho.rho) == Approx(0.9).margin(1e-7));
        CHECK((ops.position * rho.rho).trace().real() == Approx(1.0).margin(1e-7));
        CHECK((ops.momentum * rho.rho).trace().real() == Approx(-0.4).margin(1e-7));
        CHECK(rho.min_eigenvalue() > -1e-10);
    }
    SECTION("moment sets below the coherent floor are rejected") {
        CHECK_THROWS_AS(displaced_thermal_state(40, 1.0, 0.0, 0.1, 1.0),
                        std::invalid_argument);
    }
    SECTION("insufficient truncation is rejected") {
        CHECK_THROWS_AS(displaced_thermal_state(4, 2.0, 0.0, 4.0, 1.0),
                        OracleIntegrityError);
    }
}

TEST_CASE("lindblad_rhs") {
    const OscillatorParams params{1.0, 1.0};
    const int dim = 35;
    const auto ops = build_operators(dim, params.omega0);

    SECTION("thermal state is stationary at matching bath occupation") {
        const double n = 0.6;
        const auto rho = displaced_thermal_state(dim, 0.0, 0.0, n * params.omega0,
                                                 params.omega0);
        const CMatrix d = lindblad_rhs(rho, 0.0, n, ops, params);
        CHECK(d.cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("trace is conserved") {
        const auto rho = displaced_thermal_state(dim, 0.8, 0.3, 1.0, params.omega0);
        for (double u : {0.0, 0.7}) {
            const CMatrix d = lindblad_rhs(rho, u, 0.4, ops, params);
            CHECK(std::abs(d.trace()) < 1e-12);
        }
    }
    SECTION("matches the dense operator formula") {
        const auto rho = displaced_thermal_state(dim, 0.5, -0.2, 0.8, params.omega0);
        for (double u : {0.0, -1.3}) {
            for (double n : {0.0, 0.9}) {
                const CMatrix fast = lindblad_rhs(rho, u, n, ops, params);
                const CMatrix slow = dense_lindblad(rho.rho, u, n, ops, params);
                CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    SECTION("number moment identity") {
        // d<N>/dt = 2 gamma (n - <N>) - u <P> / omega0 ... with u = 0 the
        // drive term drops and the identity is exact up to truncation.
        const auto rho = displaced_thermal_state(dim, 0.0, 0.0, 0.8, params.omega0);
        const double n = 0.3;
        const CMatrix d = lindblad_rhs(rho, 0.0, n, ops, params);
        const double lhs = expect_number(d);
        const double rhs = 2.0 * params.gamma * (n - expect_number(rho.rho));
        CHECK(lhs == Approx(rhs).margin(1e-8));
    }
    SECTION("first moment decay") {
        const auto rho = displaced_thermal_state(dim, 0.7, 0.1, 0.5, params.omega0);
        const CMatrix d = lindblad_rhs(rho, 0.0, 0.2, ops, params);
        const Cplx lhs = (ops.annihilate * d).trace();
        const Cplx rhs = (Cplx(0.0, -params.omega0) - params.gamma) *
                         (ops.annihilate * rho.rho).trace();
        CHECK(std::abs(lhs - rhs) < 1e-8);
    }
    SECTION("negative bath occupation is rejected") {
        const auto rho = displaced_thermal_state(dim, 0.0, 0.0, 0.5, params.omega0);
        CHECK_THROWS_AS(lindblad_rhs(rho, 0.0, -0.1, ops, params), std::domain_error);
    }
}

TEST_CASE("simulate_lindblad") {
    SECTION("constant bath gives the analytic relaxation") {
        Scenario sc = detail::base_scenario("thermalize");
        sc.law = ControlLaw::IncoherentExponential;
        sc.gains.kappa = 1.0; // n held at n* = E*/omega0
        sc.e_star = 0.4;
        sc.initial_energies = {1.0};
        sc.q0 = 0.0;
        sc.p0 = 0.0;
        sc.t_final = 5.0;
        sc.oracle_dim = 40;

        const auto mf = simulate_continuous(sc);
        const auto res = simulate_lindblad(sc, mf);
        for (std::size_t k = 0; k < res.traj.size(); k += 500) {
            const double t = res.traj.times[k];
            const double expected =
                0.4 + (1.0 - 0.4) * std::exp(-2.0 * sc.params.gamma * t);
            CHECK(res.traj.states[k].E == Approx(expected).margin(1e-6));
        }
        CHECK(res.max_trace_drift < 1e-10);
        CHECK(res.max_hermiticity_residual < 1e-12);
        CHECK(res.min_eigenvalue > -1e-8);
    }
    SECTION("vacuum with a cold bath is stationary") {
        Scenario sc = detail::base_scenario("vacuum");
        sc.law = ControlLaw::IncoherentFinite;
        sc.gains.gamma_fin = 1.0;
        sc.e_star = 0.0;
        sc.initial_energies = {0.0};
        sc.q0 = 0.0;
        sc.p0 = 0.0;
        sc.t_final = 1.0;
        sc.oracle_dim = 10;

        const auto mf = simulate_continuous(sc);
        const auto res = simulate_lindblad(sc, mf);
        CHECK(res.traj.states.back().E == Approx(0.0).margin(1e-10));
        CHECK(res.traj.states.back().Q == Approx(0.0).margin(1e-10));
    }
    SECTION("replays with negative n are rejected") {
        auto sc = *find_scenario("fig3-dotted");
        sc.oracle_dim = 30;
        const auto mf = simulate_continuous(sc);
        REQUIRE(mf.min_n() < 0.0);
        CHECK_THROWS_AS(simulate_lindblad(sc, mf), std::domain_error);
    }
    SECTION("missing oracle dimension is a configuration error") {
        auto sc = *find_scenario("fig3-solid");
        sc.t_final = 0.1;
        const auto mf = simulate_continuous(sc);
        CHECK_THROWS_AS(simulate_lindblad(sc, mf), ConfigError);
    }
}
