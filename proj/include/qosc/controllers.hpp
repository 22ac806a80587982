#pragma once

// Speed-gradient control laws for steering the oscillator energy:
// differential (SGA-D), finite (SGA-F), robustified differential (SGA-DR),
// and the two incoherent-only laws.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "qosc/model.hpp"

namespace qosc {

enum class ControlLaw {
    SgaD,                  ///< differential form, u and n
    SgaF,                  ///< finite (linear) form, u and n
    IncoherentFinite,      ///< n = -Gamma (E - E*), u = 0
    IncoherentExponential, ///< n = ((1-kappa) E + kappa E*) / omega0, u = 0
    SgaDr,                 ///< robustified differential form
};

inline const char* control_law_name(ControlLaw law) {
    switch (law) {
    case ControlLaw::SgaD: return "sga-d";
    case ControlLaw::SgaF: return "sga-f";
    case ControlLaw::IncoherentFinite: return "incoherent-finite";
    case ControlLaw::IncoherentExponential: return "incoherent-exponential";
    case ControlLaw::SgaDr: return "sga-dr";
    }
    return "?";
}

inline ControlLaw control_law_from_name(const std::string& name) {
    if (name == "sga-d") return ControlLaw::SgaD;
    if (name == "sga-f") return ControlLaw::SgaF;
    if (name == "incoherent-finite") return ControlLaw::IncoherentFinite;
    if (name == "incoherent-exponential") return ControlLaw::IncoherentExponential;
    if (name == "sga-dr") return ControlLaw::SgaDr;
    throw std::invalid_argument("unknown control law: " + name);
}

/// Gains shared by all the control laws. gamma2 is always the untilded
/// coefficient; the differential forms derive the tilded one internally.
struct SgaGains {
    double gamma1 = 0.0;    ///< coherent-channel gain, >= 0
    double gamma2 = 0.0;    ///< incoherent-channel gain (untilded), >= 0
    double alpha1 = 0.0;    ///< robustification leak on u, >= 0
    double alpha2 = 0.0;    ///< robustification leak on n, >= 0
    double kappa = 0.0;     ///< mixing parameter of the exponential law, (0, 1]
    double gamma_fin = 0.0; ///< gain of the incoherent finite law, > 0 when used

    double gamma2_tilde(const OscillatorParams& params) const {
        return 2.0 * params.gamma * params.omega0 * gamma2;
    }
};

/// Internal memory of the differential controllers.
struct ControllerMemory {
    double u = 0.0;
    double n = 0.0;
};

/// Rate of change of the goal function along the plant flow:
/// (E - E*)(-u P + 2 gamma (omega0 n - E)).
inline double goal_speed(const MeanState& state, const ControlInput& ctrl,
                         const OscillatorParams& params, double e_star) {
    return (state.E - e_star) *
           (-ctrl.u * state.P +
            2.0 * params.gamma * (params.omega0 * ctrl.n - state.E));
}

/// SGA-D: du/dt = Gamma1 P (E - E*), dn/dt = -Gamma2~ (E - E*).
inline std::pair<double, double> sga_d_rhs(const MeanState& state, const SgaGains& gains,
                                           const OscillatorParams& params, double e_star) {
    const double err = state.E - e_star;
    return {gains.gamma1 * state.P * err, -gains.gamma2_tilde(params) * err};
}

/// SGA-F: u = Gamma1 P (E - E*), n = -Gamma2~ (E - E*).
/// n is negative (unphysical) whenever E > E*.
inline ControlInput sga_f(const MeanState& state, const SgaGains& gains,
                          const OscillatorParams& params, double e_star) {
    const double err = state.E - e_star;
    ControlInput out;
    out.u = gains.gamma1 * state.P * err;
    out.n = -gains.gamma2_tilde(params) * err;
    return out;
}

/// Incoherent-only finite law: n = -Gamma (E - E*). Heating only; the
/// output goes negative for E > E*.
inline double incoherent_finite(double e, const SgaGains& gains, double e_star) {
    if (!(gains.gamma_fin > 0.0))
        throw std::invalid_argument("incoherent_finite: gamma_fin must be positive");
    return -gains.gamma_fin * (e - e_star);
}

/// Incoherent-only exponential law: n = ((1-kappa) E + kappa E*) / omega0.
/// Non-negative for all E, E* >= 0 when kappa is in (0, 1].
inline double incoherent_exponential(double e, const SgaGains& gains,
                                     const OscillatorParams& params, double e_star) {
    if (!(gains.kappa > 0.0) || !(gains.kappa <= 1.0))
        throw std::invalid_argument("incoherent_exponential: kappa must be in (0, 1]");
    return ((1.0 - gains.kappa) * e + gains.kappa * e_star) / params.omega0;
}

/// SGA-DR: du/dt = Gamma1 P (E - E*) - alpha1 u,
///         dn/dt = -Gamma2 (E - E*) - alpha2 (n - n*).
/// The incoherent coefficient is the untilded Gamma2 as printed; set
/// use_tilde to substitute 2 gamma omega0 Gamma2 instead.
inline std::pair<double, double> sga_dr_rhs(const MeanState& state, const ControllerMemory& mem,
                                            const SgaGains& gains, const OscillatorParams& params,
                                            const Target& target, bool use_tilde = false) {
    const double err = state.E - target.e_star;
    const double g2 = use_tilde ? gains.gamma2_tilde(params) : gains.gamma2;
    return {gains.gamma1 * state.P * err - gains.alpha1 * mem.u,
            -g2 * err - gains.alpha2 * (mem.n - target.n_star)};
}

} // namespace qosc
