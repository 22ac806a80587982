#pragma once

// Mean-field model of a damped quantum harmonic oscillator driven by a
// coherent field u(t) and by the excitation number n(t) of an engineered
// environment. Everything is dimensionless (hbar = 1).

#include <cmath>
#include <stdexcept>

namespace qosc {

struct OscillatorParams {
    double omega0 = 1.0; ///< oscillator angular frequency
    double gamma = 1.0;  ///< relaxation rate

    void validate() const {
        if (!(omega0 > 0.0) || !std::isfinite(omega0))
            throw std::invalid_argument("OscillatorParams: omega0 must be positive");
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument("OscillatorParams: gamma must be positive");
    }
};

/// First-moment state of the plant: mean energy, position, momentum.
/// Also used for its time derivative.
struct MeanState {
    double E = 0.0;
    double Q = 0.0;
    double P = 0.0;

    bool finite() const {
        return std::isfinite(E) && std::isfinite(Q) && std::isfinite(P);
    }
};

struct ControlInput {
    double u = 0.0; ///< coherent drive amplitude, unconstrained
    double n = 0.0; ///< bath excitation number, physical when >= 0

    bool physical() const { return n >= 0.0; }
    bool finite() const { return std::isfinite(u) && std::isfinite(n); }
};

/// Control target: energy setpoint and the equilibrium controls it induces.
struct Target {
    double e_star = 0.0;
    double n_star = 0.0;
    double u_star = 0.0;

    static Target for_energy(double e_star, const OscillatorParams& params) {
        if (!(e_star >= 0.0) || !std::isfinite(e_star))
            throw std::invalid_argument("Target: e_star must be non-negative");
        Target t;
        t.e_star = e_star;
        t.n_star = e_star / params.omega0;
        t.u_star = 0.0;
        return t;
    }
};

/// Right-hand side of the first-moment equations:
///   dE/dt = -u P + 2 gamma (omega0 n - E)
///   dQ/dt = P - gamma Q
///   dP/dt = -omega0^2 Q - u - gamma P
inline MeanState mean_field_rhs(const MeanState& state, const ControlInput& ctrl,
                                const OscillatorParams& params) {
    if (!state.finite() || !ctrl.finite())
        throw std::invalid_argument("mean_field_rhs: non-finite input");
    MeanState d;
    d.E = -ctrl.u * state.P + 2.0 * params.gamma * (params.omega0 * ctrl.n - state.E);
    d.Q = state.P - params.gamma * state.Q;
    d.P = -params.omega0 * params.omega0 * state.Q - ctrl.u - params.gamma * state.P;
    return d;
}

/// Goal function W(E) = (E - E*)^2 / 2.
inline double objective(double e, double e_star) {
    if (!std::isfinite(e) || !std::isfinite(e_star))
        throw std::invalid_argument("objective: non-finite input");
    const double d = e - e_star;
    return 0.5 * d * d;
}

/// Planck occupation of a thermal bath at inverse temperature beta:
/// n = 1 / (exp(omega0 beta) - 1).
inline double n_from_temperature(double beta, double omega0) {
    if (!(beta > 0.0))
        throw std::domain_error("n_from_temperature: beta must be positive");
    if (!(omega0 > 0.0))
        throw std::domain_error("n_from_temperature: omega0 must be positive");
    return 1.0 / std::expm1(omega0 * beta);
}

} // namespace qosc
