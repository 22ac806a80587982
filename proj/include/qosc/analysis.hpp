#pragma once

// Certificates and monitors for the speed-gradient closed loops: Lyapunov
// function, gain bounds guaranteeing n(t) >= 0, the closed-form solution of
// the incoherent finite law, the exponential-stability gain condition, a
// Lyapunov-inequality certificate for the (P, Q) subsystem, and empirical
// decay-rate fitting.

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qosc/controllers.hpp"
#include "qosc/model.hpp"
#include "qosc/trajectory.hpp"

namespace qosc {

/// V1 = W(E) + u^2/(2 Gamma1) + (n - n*)^2/(2 Gamma2), with u* = 0.
inline double lyapunov_v1(const MeanState& state, const ControllerMemory& mem,
                          const SgaGains& gains, const Target& target) {
    if (!(gains.gamma1 > 0.0) || !(gains.gamma2 > 0.0))
        throw std::invalid_argument(
            "lyapunov_v1: requires gamma1 > 0 and gamma2 > 0; "
            "use the objective monitor alone for gain-free laws");
    const double du = mem.u - target.u_star;
    const double dn = mem.n - target.n_star;
    return objective(state.E, target.e_star) + du * du / (2.0 * gains.gamma1) +
           dn * dn / (2.0 * gains.gamma2);
}

enum class TransferMode { Heating, Cooling };

/// Sufficient-gain certificate for keeping n(t) >= 0 under SGA-D with the
/// V0-minimizing initialization u(0) = 0, n(0) = n*.
struct PositivityVerdict {
    TransferMode mode = TransferMode::Heating;
    double gamma2_max = 0.0; ///< admissible upper bound on Gamma2
    double alpha = 0.0;      ///< sqrt(Gamma2) * omega0 for the configured gain
    bool satisfied = false;
};

/// Cap used instead of an unbounded cooling gain limit.
inline constexpr double kGamma2MaxCap = 1e12;

/// Heating: Gamma2 <= 1/omega0^2. Cooling: Gamma2 <= 1/(omega0 (E0/E* - 1))^2.
inline double positivity_bound(TransferMode mode, double e0, double e_star, double omega0) {
    if (!(omega0 > 0.0))
        throw std::invalid_argument("positivity_bound: omega0 must be positive");
    if (mode == TransferMode::Heating) {
        if (!(e_star > e0))
            throw std::invalid_argument("positivity_bound: heating requires e_star > e0");
        return 1.0 / (omega0 * omega0);
    }
    if (!(e_star > 0.0))
        throw std::invalid_argument("positivity_bound: cooling bound undefined for e_star = 0");
    if (!(e0 > e_star))
        throw std::invalid_argument("positivity_bound: cooling requires e0 > e_star");
    const double depth = e0 / e_star - 1.0;
    const double bound = 1.0 / (omega0 * omega0 * depth * depth);
    return std::min(bound, kGamma2MaxCap);
}

inline PositivityVerdict check_positivity(TransferMode mode, double e0, double e_star,
                                          double omega0, double gamma2) {
    PositivityVerdict v;
    v.mode = mode;
    v.gamma2_max = positivity_bound(mode, e0, e_star, omega0);
    v.alpha = std::sqrt(gamma2) * omega0;
    v.satisfied = gamma2 <= v.gamma2_max;
    return v;
}

/// Lowest reachable energy under the cooling certificate: delta(alpha) E0
/// with delta(alpha) = alpha / (1 + alpha).
inline double cooling_floor(double alpha, double e0) {
    if (!(alpha >= 0.0) || !(e0 >= 0.0))
        throw std::invalid_argument("cooling_floor: alpha and e0 must be non-negative");
    return alpha / (1.0 + alpha) * e0;
}

/// Closed-form energy trajectory of the incoherent finite law:
/// E(t) = E*/(1 + 1/(omega0 Gamma)) (1 - e^{-Omega t}) + E(0) e^{-Omega t},
/// Omega = 2 gamma (omega0 Gamma + 1).
inline double finite_form_solution(double t, double e0, double e_star, double gamma_fin,
                                   const OscillatorParams& params) {
    if (!(gamma_fin > 0.0))
        throw std::invalid_argument("finite_form_solution: gamma_fin must be positive");
    if (!(t >= 0.0))
        throw std::invalid_argument("finite_form_solution: t must be non-negative");
    const double omega_big = 2.0 * params.gamma * (params.omega0 * gamma_fin + 1.0);
    const double decay = std::exp(-omega_big * t);
    const double limit = e_star / (1.0 + 1.0 / (params.omega0 * gamma_fin));
    return limit * (1.0 - decay) + e0 * decay;
}

/// Steady-state energy reached by the incoherent finite law.
inline double finite_form_limit(double e_star, double gamma_fin, const OscillatorParams& params) {
    return e_star / (1.0 + 1.0 / (params.omega0 * gamma_fin));
}

/// SGA-DR exponential-stability gain condition: gamma > 4 Gamma1 Gamma2
/// (strict).
inline bool stability_condition_dr(double gamma, double gamma1, double gamma2) {
    return gamma > 4.0 * gamma1 * gamma2;
}

/// Drift matrix of the (P, Q) subsystem, X = (P, Q).
inline Eigen::Matrix2d pq_drift_matrix(const OscillatorParams& params) {
    Eigen::Matrix2d a;
    a << -params.gamma, -params.omega0 * params.omega0,
         1.0, -params.gamma;
    return a;
}

/// True iff R is symmetric positive definite and R A + A^T R + gamma0 R has
/// no eigenvalue above tol.
inline bool is_lyapunov_certificate(const Eigen::Matrix2d& r, const OscillatorParams& params,
                                    double gamma0, double tol = 1e-10) {
    if ((r - r.transpose()).cwiseAbs().maxCoeff() > tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es_r(r);
    if (es_r.eigenvalues().minCoeff() <= 0.0) return false;
    const Eigen::Matrix2d a = pq_drift_matrix(params);
    const Eigen::Matrix2d residual = r * a + a.transpose() * r + gamma0 * r;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (residual + residual.transpose()));
    return es.eigenvalues().maxCoeff() <= tol;
}

/// Solves R (A + gamma0 I / 2) + (A + gamma0 I / 2)^T R = -I for the
/// symmetric R certifying R A + A^T R <= -gamma0 R. Requires 0 < gamma0 <
/// gamma.
inline Eigen::Matrix2d lyapunov_matrix(const OscillatorParams& params, double gamma0) {
    if (!(gamma0 > 0.0) || !(gamma0 < params.gamma))
        throw std::invalid_argument("lyapunov_matrix: need 0 < gamma0 < gamma");
    const Eigen::Matrix2d m = pq_drift_matrix(params) + 0.5 * gamma0 * Eigen::Matrix2d::Identity();

    // Unknowns (r11, r12, r22) of R M + M^T R = -I.
    Eigen::Matrix3d sys;
    sys << 2.0 * m(0, 0), 2.0 * m(1, 0), 0.0,
           m(0, 1), m(1, 1) + m(0, 0), m(1, 0),
           0.0, 2.0 * m(0, 1), 2.0 * m(1, 1);
    Eigen::Vector3d rhs(-1.0, 0.0, -1.0);
    const Eigen::Vector3d x = sys.fullPivLu().solve(rhs);

    Eigen::Matrix2d r;
    r << x(0), x(1), x(1), x(2);
    if (!is_lyapunov_certificate(r, params, gamma0))
        throw std::runtime_error("lyapunov_matrix: constructed R fails verification");
    return r;
}

/// Result of fitting log||z(t) - z*|| against time on the trajectory tail.
struct RateFit {
    double rate = 0.0;         ///< positive value means decay exp(-rate t)
    bool saturated = false;    ///< distance hit numerical zero in the window
    double rms_residual = 0.0; ///< rms deviation of log-distance from the fit
    double decay_span = 0.0;   ///< fitted drop of log-distance over the window
};

/// Least-squares decay rate of the distance to the closed-loop equilibrium
/// (E*, 0, 0, u*, n*) over the tail of the run.
inline RateFit exponential_rate_fit(const Trajectory& traj, const Target& target,
                                    double tail_fraction = 0.5) {
    if (traj.size() < 4)
        throw std::invalid_argument("exponential_rate_fit: trajectory too short");
    if (!(tail_fraction > 0.0) || !(tail_fraction <= 1.0))
        throw std::invalid_argument("exponential_rate_fit: tail_fraction must be in (0, 1]");

    const std::size_t begin = traj.size() - static_cast<std::size_t>(
        static_cast<double>(traj.size()) * tail_fraction);
    RateFit fit;

    std::vector<double> ts, logs;
    for (std::size_t k = begin; k < traj.size(); ++k) {
        const auto& s = traj.states[k];
        const auto& c = traj.controls[k];
        const double de = s.E - target.e_star;
        const double du = c.u - target.u_star;
        const double dn = c.n - target.n_star;
        const double dist = std::sqrt(de * de + s.Q * s.Q + s.P * s.P + du * du + dn * dn);
        if (dist < 1e-14) {
            fit.saturated = true;
            continue;
        }
        ts.push_back(traj.times[k]);
        logs.push_back(std::log(dist));
    }
    if (ts.size() < 2) {
        fit.saturated = true;
        return fit;
    }

    double mean_t = 0.0, mean_l = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        mean_t += ts[k];
        mean_l += logs[k];
    }
    mean_t /= static_cast<double>(ts.size());
    mean_l /= static_cast<double>(ts.size());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        num += (ts[k] - mean_t) * (logs[k] - mean_l);
        den += (ts[k] - mean_t) * (ts[k] - mean_t);
    }
    const double slope = num / den;
    fit.rate = -slope;
    fit.decay_span = -slope * (ts.back() - ts.front());

    double ss = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double pred = mean_l + slope * (ts[k] - mean_t);
        ss += (logs[k] - pred) * (logs[k] - pred);
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(ts.size()));
    return fit;
}

} // namespace qosc
