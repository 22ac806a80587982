#pragma once

// Fixed-step RK4 integration of the plant + controller loop, in continuous
// feedback and in sampled-data (zero-order-hold) mode.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qosc/analysis.hpp"
#include "qosc/controllers.hpp"
#include "qosc/errors.hpp"
#include "qosc/model.hpp"
#include "qosc/trajectory.hpp"

namespace qosc {

/// Classical fourth-order Runge-Kutta step. State must support vector-space
/// arithmetic (Eigen types do).
template <typename State, typename Rhs>
State rk4_step(Rhs&& rhs, const State& y, double t, double h) {
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = rhs(t + h, State(y + h * k3));
    return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// One closed-loop run: plant, control law, gains, target, horizon.
struct Scenario {
    std::string id;
    OscillatorParams params;

    std::vector<double> initial_energies{0.0}; ///< one run per entry
    double q0 = 1.0;
    double p0 = 0.0;

    ControlLaw law = ControlLaw::SgaD;
    SgaGains gains;
    double e_star = 0.0;
    std::optional<double> u0; ///< differential-controller memory, default 0
    std::optional<double> n0; ///< default n* (the V0-minimizing choice)

    double t_final = 20.0;
    double h_int = 1e-3;
    std::optional<double> sample_interval; ///< zero-order-hold interval
    std::optional<int> oracle_dim;         ///< Fock truncation for cross-checks

    bool dr_use_tilde = false;       ///< SGA-DR with the tilded Gamma2
    bool literal_paper_update = false; ///< sampled update without the h factor
    bool clamp_n = false;            ///< clamp applied n at zero ("physical replay")

    Target target() const { return Target::for_energy(e_star, params); }

    bool differential_law() const {
        return law == ControlLaw::SgaD || law == ControlLaw::SgaDr;
    }

    void validate() const {
        params.validate();
        if (initial_energies.empty())
            throw ConfigError("scenario '" + id + "': initial energy is mandatory");
        for (double e0 : initial_energies)
            if (!std::isfinite(e0) || e0 < 0.0)
                throw ConfigError("scenario '" + id + "': initial energies must be >= 0");
        if (!(e_star >= 0.0) || !std::isfinite(e_star))
            throw ConfigError("scenario '" + id + "': e_star must be >= 0");
        if (!(h_int > 0.0))
            throw ConfigError("scenario '" + id + "': h_int must be positive");
        if (!(t_final > 0.0))
            throw ConfigError("scenario '" + id + "': t_final must be positive");
        if (gains.gamma1 < 0.0 || gains.gamma2 < 0.0 || gains.alpha1 < 0.0 ||
            gains.alpha2 < 0.0)
            throw ConfigError("scenario '" + id + "': gains must be non-negative");
        if (law == ControlLaw::IncoherentFinite && !(gains.gamma_fin > 0.0))
            throw ConfigError("scenario '" + id + "': gamma_fin must be positive");
        if (law == ControlLaw::IncoherentExponential &&
            (!(gains.kappa > 0.0) || !(gains.kappa <= 1.0)))
            throw ConfigError("scenario '" + id + "': kappa must be in (0, 1]");
        if (sample_interval) {
            if (law != ControlLaw::SgaDr)
                throw ConfigError("scenario '" + id +
                                  "': sampled-data mode supports only the sga-dr law");
            const double si = *sample_interval;
            const double steps = si / h_int;
            if (!(si > 0.0) ||
                std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
                throw ConfigError("scenario '" + id +
                                  "': sample_interval must be a positive multiple of h_int");
        }
        if (oracle_dim && *oracle_dim < 2)
            throw ConfigError("scenario '" + id + "': oracle dimension must be >= 2");
    }
};

namespace detail {

inline constexpr double kBlowupLimit = 1e12;

template <typename Vec>
void check_blowup(const Vec& y, double t) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i]) || std::abs(y[i]) > kBlowupLimit)
            throw SimulationBlowup(t, "integration blow-up at t = " + std::to_string(t));
    }
}

inline MonitorSample make_monitors(const MeanState& s, const ControlInput& c,
                                   const Scenario& sc, const Target& target) {
    MonitorSample m;
    m.objective = objective(s.E, target.e_star);
    m.speed = goal_speed(s, c, sc.params, target.e_star);
    if (sc.gains.gamma1 > 0.0 && sc.gains.gamma2 > 0.0)
        m.lyapunov_v1 = lyapunov_v1(s, ControllerMemory{c.u, c.n}, sc.gains, target);
    else
        m.lyapunov_v1 = std::numeric_limits<double>::quiet_NaN();
    return m;
}

/// Algebraic control value for the finite laws.
inline ControlInput finite_control(const MeanState& s, const Scenario& sc,
                                   const Target& target) {
    switch (sc.law) {
    case ControlLaw::SgaF:
        return sga_f(s, sc.gains, sc.params, target.e_star);
    case ControlLaw::IncoherentFinite:
        return ControlInput{0.0, incoherent_finite(s.E, sc.gains, target.e_star)};
    case ControlLaw::IncoherentExponential:
        return ControlInput{0.0,
                            incoherent_exponential(s.E, sc.gains, sc.params, target.e_star)};
    default:
        throw std::logic_error("finite_control: not a finite law");
    }
}

inline ControlInput applied_control(const ControlInput& c, const Scenario& sc) {
    if (sc.clamp_n && c.n < 0.0) return ControlInput{c.u, 0.0};
    return c;
}

inline long step_count(const Scenario& sc) {
    return static_cast<long>(std::ceil(sc.t_final / sc.h_int - 1e-9));
}

} // namespace detail

/// Integrates the closed loop with continuous feedback. Differential laws
/// augment the state with the controller memory (E, Q, P, u, n); finite laws
/// evaluate their control algebraically at every stage.
inline Trajectory simulate_continuous(const Scenario& sc, double e0) {
    sc.validate();
    const Target target = sc.target();
    const long n_steps = detail::step_count(sc);

    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.controls.reserve(n_steps + 1);
    traj.monitors.reserve(n_steps + 1);

    auto record = [&](double t, const MeanState& s, const ControlInput& c) {
        traj.times.push_back(t);
        traj.states.push_back(s);
        traj.controls.push_back(c);
        traj.monitors.push_back(detail::make_monitors(s, c, sc, target));
    };

    if (sc.differential_law()) {
        using Vec5 = Eigen::Matrix<double, 5, 1>;
        Vec5 y;
        y << e0, sc.q0, sc.p0, sc.u0.value_or(0.0), sc.n0.value_or(target.n_star);

        auto rhs = [&](double, const Vec5& v) -> Vec5 {
            const MeanState s{v[0], v[1], v[2]};
            const ControlInput c = detail::applied_control(ControlInput{v[3], v[4]}, sc);
            const MeanState ds = mean_field_rhs(s, c, sc.params);
            std::pair<double, double> dc;
            if (sc.law == ControlLaw::SgaD)
                dc = sga_d_rhs(s, sc.gains, sc.params, target.e_star);
            else
                dc = sga_dr_rhs(s, ControllerMemory{v[3], v[4]}, sc.gains, sc.params,
                                target, sc.dr_use_tilde);
            Vec5 d;
            d << ds.E, ds.Q, ds.P, dc.first, dc.second;
            return d;
        };

        record(0.0, MeanState{y[0], y[1], y[2]},
               detail::applied_control(ControlInput{y[3], y[4]}, sc));
        for (long k = 0; k < n_steps; ++k) {
            const double t = static_cast<double>(k) * sc.h_int;
            y = rk4_step(rhs, y, t, sc.h_int);
            detail::check_blowup(y, t + sc.h_int);
            record(t + sc.h_int, MeanState{y[0], y[1], y[2]},
                   detail::applied_control(ControlInput{y[3], y[4]}, sc));
        }
    } else {
        using Vec3 = Eigen::Vector3d;
        Vec3 y(e0, sc.q0, sc.p0);

        auto rhs = [&](double, const Vec3& v) -> Vec3 {
            const MeanState s{v[0], v[1], v[2]};
            const ControlInput c =
                detail::applied_control(detail::finite_control(s, sc, target), sc);
            const MeanState ds = mean_field_rhs(s, c, sc.params);
            return Vec3(ds.E, ds.Q, ds.P);
        };

        auto control_at = [&](const Vec3& v) {
            return detail::applied_control(
                detail::finite_control(MeanState{v[0], v[1], v[2]}, sc, target), sc);
        };

        record(0.0, MeanState{y[0], y[1], y[2]}, control_at(y));
        for (long k = 0; k < n_steps; ++k) {
            const double t = static_cast<double>(k) * sc.h_int;
            y = rk4_step(rhs, y, t, sc.h_int);
            detail::check_blowup(y, t + sc.h_int);
            record(t + sc.h_int, MeanState{y[0], y[1], y[2]}, control_at(y));
        }
    }
    return traj;
}

inline Trajectory simulate_continuous(const Scenario& sc) {
    return simulate_continuous(sc, sc.initial_energies.front());
}

/// Sampled-data SGA-DR: controls are held constant over each sampling
/// interval; at the end of interval k the memory is updated from the state
/// sampled at its start,
///   u_{k+1} = u_k + h (Gamma1 P(t_k)(E(t_k) - E*) - alpha1 u_k)
/// and analogously for n. With literal_paper_update the increment is not
/// scaled by h.
inline Trajectory simulate_sampled(const Scenario& sc, double e0) {
    sc.validate();
    if (!sc.sample_interval)
        throw ConfigError("simulate_sampled: scenario has no sample_interval");
    const Target target = sc.target();
    const double hold = *sc.sample_interval;
    const long steps_per_hold =
        static_cast<long>(std::llround(hold / sc.h_int));
    const long n_steps = detail::step_count(sc);

    Trajectory traj;
    auto record = [&](double t, const MeanState& s, const ControlInput& c) {
        traj.times.push_back(t);
        traj.states.push_back(s);
        traj.controls.push_back(c);
        traj.monitors.push_back(detail::make_monitors(s, c, sc, target));
    };

    using Vec3 = Eigen::Vector3d;
    Vec3 y(e0, sc.q0, sc.p0);
    ControllerMemory mem{sc.u0.value_or(0.0), sc.n0.value_or(target.n_star)};
    MeanState hold_start{y[0], y[1], y[2]}; // plant sample at the interval start

    auto held = [&]() { return detail::applied_control(ControlInput{mem.u, mem.n}, sc); };
    auto rhs = [&](double, const Vec3& v) -> Vec3 {
        const MeanState s{v[0], v[1], v[2]};
        const MeanState ds = mean_field_rhs(s, held(), sc.params);
        return Vec3(ds.E, ds.Q, ds.P);
    };

    record(0.0, MeanState{y[0], y[1], y[2]}, held());
    for (long k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * sc.h_int;
        y = rk4_step(rhs, y, t, sc.h_int);
        detail::check_blowup(y, t + sc.h_int);
        if ((k + 1) % steps_per_hold == 0) {
            const auto [du, dn] =
                sga_dr_rhs(hold_start, mem, sc.gains, sc.params, target, sc.dr_use_tilde);
            const double scale = sc.literal_paper_update ? 1.0 : hold;
            mem.u += scale * du;
            mem.n += scale * dn;
            hold_start = MeanState{y[0], y[1], y[2]};
        }
        record(t + sc.h_int, MeanState{y[0], y[1], y[2]}, held());
    }
    return traj;
}

inline Trajectory simulate_sampled(const Scenario& sc) {
    return simulate_sampled(sc, sc.initial_energies.front());
}

/// Dispatches on whether the scenario requests zero-order-hold sampling.
inline Trajectory simulate(const Scenario& sc, double e0) {
    return sc.sample_interval ? simulate_sampled(sc, e0) : simulate_continuous(sc, e0);
}

} // namespace qosc
