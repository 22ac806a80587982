#pragma once

// Full master-equation oracle: integrates the density matrix of the damped
// oscillator in a truncated Fock basis, replaying recorded control signals,
// and extracts the (E, Q, P) expectations the mean-field model evolves.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qosc/errors.hpp"
#include "qosc/integrate.hpp"
#include "qosc/model.hpp"
#include "qosc/trajectory.hpp"

namespace qosc {

using Cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Truncated ladder operators and the observables built from them.
struct FockOperators {
    int dim = 0;
    double omega0 = 1.0;
    CMatrix annihilate; ///< a, a|k> = sqrt(k)|k-1>
    CMatrix create;     ///< a^+
    CMatrix number;     ///< a^+ a
    CMatrix position;   ///< (a + a^+) / sqrt(2 omega0)
    CMatrix momentum;   ///< sqrt(omega0/2) (a - a^+) / i
    CMatrix h0;         ///< omega0 a^+ a
};

inline FockOperators build_operators(int dim, double omega0) {
    if (dim < 2)
        throw std::invalid_argument("build_operators: dimension must be >= 2");
    if (!(omega0 > 0.0))
        throw std::invalid_argument("build_operators: omega0 must be positive");
    FockOperators ops;
    ops.dim = dim;
    ops.omega0 = omega0;
    ops.annihilate = CMatrix::Zero(dim, dim);
    for (int k = 1; k < dim; ++k)
        ops.annihilate(k - 1, k) = std::sqrt(static_cast<double>(k));
    ops.create = ops.annihilate.adjoint();
    ops.number = ops.create * ops.annihilate;
    ops.position = (ops.annihilate + ops.create) / std::sqrt(2.0 * omega0);
    ops.momentum = std::sqrt(omega0 / 2.0) * (ops.annihilate - ops.create) / Cplx(0.0, 1.0);
    ops.h0 = omega0 * ops.number;
    return ops;
}

/// Truncated-Fock-space density matrix.
struct DensityMatrix {
    int dim = 0;
    CMatrix rho;

    double trace_error() const { return std::abs(rho.trace() - Cplx(1.0, 0.0)); }
    double hermiticity_residual() const {
        return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()),
                                                  Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
    /// Population of the two highest Fock levels; truncation adequacy proxy.
    double tail_mass() const {
        return rho(dim - 1, dim - 1).real() + rho(dim - 2, dim - 2).real();
    }

    void validate(double herm_tol = 1e-10, double trace_tol = 1e-10,
                  double eig_tol = -1e-8) const {
        if (hermiticity_residual() > herm_tol)
            throw OracleIntegrityError("density matrix not Hermitian");
        if (trace_error() > trace_tol)
            throw OracleIntegrityError("density matrix trace differs from one");
        if (min_eigenvalue() < eig_tol)
            throw OracleIntegrityError("density matrix has a negative eigenvalue");
    }
};

/// Thermal state displaced to mean position q0, momentum p0, with total
/// energy e0 = omega0 <a^+ a>. The displacement amplitude is
/// beta = sqrt(omega0/2) q0 + i p0 / sqrt(2 omega0); the thermal occupation
/// makes up the remainder e0/omega0 - |beta|^2.
inline DensityMatrix displaced_thermal_state(int dim, double q0, double p0, double e0,
                                             double omega0) {
    const FockOperators ops = build_operators(dim, omega0);
    const Cplx beta(std::sqrt(omega0 / 2.0) * q0, p0 / std::sqrt(2.0 * omega0));
    const double coherent = std::norm(beta);
    double n_th = e0 / omega0 - coherent;
    if (n_th < -1e-12)
        throw std::invalid_argument(
            "displaced_thermal_state: e0 = " + std::to_string(e0) +
            " is below the coherent floor omega0*|beta|^2 = " +
            std::to_string(omega0 * coherent) +
            "; no quantum state has these moments");
    n_th = std::max(n_th, 0.0);

    CMatrix rho = CMatrix::Zero(dim, dim);
    if (n_th == 0.0) {
        rho(0, 0) = 1.0;
    } else {
        const double ratio = n_th / (1.0 + n_th);
        double p = 1.0 / (1.0 + n_th);
        for (int k = 0; k < dim; ++k) {
            rho(k, k) = p;
            p *= ratio;
        }
    }

    const CMatrix gen = beta * ops.create - std::conj(beta) * ops.annihilate;
    const CMatrix disp = gen.exp();
    DensityMatrix out;
    out.dim = dim;
    out.rho = disp * rho * disp.adjoint();
    // Truncated displacement is only approximately unitary; renormalize the
    // residual before the adequacy check.
    out.rho /= out.rho.trace().real();
    if (out.tail_mass() > 1e-8)
        throw OracleIntegrityError(
            "displaced_thermal_state: truncation dimension too small for the "
            "requested state");
    return out;
}

namespace detail {

/// GKSL right-hand side evaluated with the ladder structure of the
/// operators, O(dim^2):
///   drho = -i [h0 + u Q, rho]
///          + gamma (n+1) (2 a rho a^+ - N rho - rho N)
///          + gamma  n    (2 a^+ rho a - M rho - rho M),
/// N = a^+ a = diag(j), M = a a^+ = diag(j+1, top row truncated to 0).
inline CMatrix lindblad_apply(const CMatrix& rho, double u, double n,
                              const OscillatorParams& params, int dim,
                              const std::vector<double>& sq) {
    CMatrix out(dim, dim);
    const double g_down = params.gamma * (n + 1.0);
    const double g_up = params.gamma * n;
    const double qscale = u / std::sqrt(2.0 * params.omega0);
    const Cplx mi(0.0, -1.0);

    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
            // -i [h0, rho], h0 diagonal.
            Cplx v = mi * (params.omega0 * static_cast<double>(j - k)) * rho(j, k);

            // -i u [Q, rho] with Q = (a + a^+)/sqrt(2 omega0).
            Cplx comm_q(0.0, 0.0);
            if (j + 1 < dim) comm_q += sq[j + 1] * rho(j + 1, k);
            if (j >= 1) comm_q += sq[j] * rho(j - 1, k);
            if (k >= 1) comm_q -= sq[k] * rho(j, k - 1);
            if (k + 1 < dim) comm_q -= sq[k + 1] * rho(j, k + 1);
            v += mi * qscale * comm_q;

            // Downward dissipator.
            Cplx diss = -static_cast<double>(j + k) * rho(j, k);
            if (j + 1 < dim && k + 1 < dim)
                diss += 2.0 * sq[j + 1] * sq[k + 1] * rho(j + 1, k + 1);
            v += g_down * diss;

            // Upward dissipator; a a^+ truncates to zero on the top level.
            const double mj = (j + 1 < dim) ? static_cast<double>(j + 1) : 0.0;
            const double mk = (k + 1 < dim) ? static_cast<double>(k + 1) : 0.0;
            Cplx pump = -(mj + mk) * rho(j, k);
            if (j >= 1 && k >= 1) pump += 2.0 * sq[j] * sq[k] * rho(j - 1, k - 1);
            v += g_up * pump;

            out(j, k) = v;
        }
    }
    return out;
}

inline std::vector<double> sqrt_table(int dim) {
    std::vector<double> sq(dim + 1);
    for (int k = 0; k <= dim; ++k) sq[k] = std::sqrt(static_cast<double>(k));
    return sq;
}

} // namespace detail

/// Master-equation right-hand side for a valid state and a physical bath.
inline CMatrix lindblad_rhs(const DensityMatrix& rho, double u, double n,
                            const FockOperators& ops, const OscillatorParams& params) {
    if (n < 0.0)
        throw std::domain_error("lindblad_rhs: bath occupation n must be non-negative");
    if (rho.dim != ops.dim)
        throw std::invalid_argument("lindblad_rhs: dimension mismatch");
    return detail::lindblad_apply(rho.rho, u, n, params, ops.dim,
                                  detail::sqrt_table(ops.dim));
}

/// Oracle run output with its integrity metrics.
struct OracleResult {
    Trajectory traj;
    double max_trace_drift = 0.0;
    double max_hermiticity_residual = 0.0;
    double min_eigenvalue = 1.0;
    double max_tail_mass = 0.0;
};

/// Integrates the master equation replaying the controls recorded by a
/// mean-field run (piecewise-linear in time) and reports the first-moment
/// expectations on the same grid. Rejects runs where the replayed n(t) goes
/// negative or any integrity threshold is crossed.
inline OracleResult simulate_lindblad(const Scenario& sc, const Trajectory& replay) {
    sc.validate();
    if (!sc.oracle_dim)
        throw ConfigError("simulate_lindblad: scenario has no oracle dimension");
    if (replay.size() < 2)
        throw std::invalid_argument("simulate_lindblad: replay trajectory too short");
    const int dim = *sc.oracle_dim;
    const double h = replay.times[1] - replay.times[0];
    const Target target = sc.target();

    for (const auto& c : replay.controls)
        if (c.n < -1e-12)
            throw std::domain_error(
                "simulate_lindblad: replayed n(t) is negative; the oracle only "
                "accepts physical bath occupations");

    const FockOperators ops = build_operators(dim, sc.params.omega0);
    const auto sq = detail::sqrt_table(dim);
    const MeanState& init = replay.states.front();
    DensityMatrix state = displaced_thermal_state(dim, init.Q, init.P, init.E,
                                                  sc.params.omega0);

    auto control_at = [&](double t) -> ControlInput {
        const double pos = t / h;
        const auto last = static_cast<std::ptrdiff_t>(replay.size()) - 1;
        auto k = static_cast<std::ptrdiff_t>(std::floor(pos));
        k = std::clamp(k, std::ptrdiff_t{0}, last - 1);
        const double th = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
        const auto& a = replay.controls[static_cast<std::size_t>(k)];
        const auto& b = replay.controls[static_cast<std::size_t>(k + 1)];
        return ControlInput{a.u + th * (b.u - a.u),
                            std::max(a.n + th * (b.n - a.n), 0.0)};
    };

    auto rhs = [&](double t, const CMatrix& r) -> CMatrix {
        const ControlInput c = control_at(t);
        return detail::lindblad_apply(r, c.u, c.n, sc.params, dim, sq);
    };

    auto expectations = [&](const CMatrix& r) -> MeanState {
        MeanState s;
        double num = 0.0;
        for (int j = 0; j < dim; ++j) num += static_cast<double>(j) * r(j, j).real();
        s.E = sc.params.omega0 * num;
        double qd = 0.0, pd = 0.0;
        for (int j = 0; j + 1 < dim; ++j) {
            qd += sq[j + 1] * (r(j + 1, j) + r(j, j + 1)).real();
            pd += sq[j + 1] * (r(j, j + 1) - r(j + 1, j)).imag();
        }
        s.Q = qd / std::sqrt(2.0 * sc.params.omega0);
        s.P = -std::sqrt(sc.params.omega0 / 2.0) * pd;
        return s;
    };

    OracleResult res;
    auto record = [&](double t) {
        const MeanState s = expectations(state.rho);
        const ControlInput c = control_at(t);
        res.traj.times.push_back(t);
        res.traj.states.push_back(s);
        res.traj.controls.push_back(c);
        res.traj.monitors.push_back(detail::make_monitors(s, c, sc, target));
    };

    auto integrity = [&](double t, bool with_eigs) {
        res.max_trace_drift = std::max(res.max_trace_drift, state.trace_error());
        res.max_hermiticity_residual =
            std::max(res.max_hermiticity_residual, state.hermiticity_residual());
        res.max_tail_mass = std::max(res.max_tail_mass, state.tail_mass());
        if (res.max_trace_drift > 1e-6)
            throw OracleIntegrityError("trace drift exceeded 1e-6 at t = " +
                                       std::to_string(t));
        if (res.max_hermiticity_residual > 1e-10)
            throw OracleIntegrityError("Hermiticity residual exceeded 1e-10 at t = " +
                                       std::to_string(t));
        if (res.max_tail_mass > 1e-4)
            throw OracleIntegrityError("Fock truncation inadequate (tail mass > 1e-4) "
                                       "at t = " + std::to_string(t));
        if (with_eigs) {
            res.min_eigenvalue = std::min(res.min_eigenvalue, state.min_eigenvalue());
            if (res.min_eigenvalue < -1e-6)
                throw OracleIntegrityError("density matrix lost positivity at t = " +
                                           std::to_string(t));
        }
    };

    record(0.0);
    integrity(0.0, true);
    const std::size_t n_steps = replay.size() - 1;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = replay.times[k];
        state.rho = rk4_step(rhs, state.rho, t, h);
        record(replay.times[k + 1]);
        integrity(replay.times[k + 1], (k + 1) % 100 == 0 || k + 1 == n_steps);
    }
    return res;
}

} // namespace qosc
