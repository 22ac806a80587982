#pragma once

// Trajectory serialization. Fixed header and 17 significant digits so that
// identical runs diff byte-for-byte and every report scalar can be recovered
// from the file.

#include <cstdio>
#include <ostream>
#include <string>

#include "qosc/trajectory.hpp"

namespace qosc {

inline constexpr const char* kCsvHeader = "t,E,Q,P,u,n,W,V1,speed";

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << kCsvHeader << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& s = traj.states[k];
        const auto& c = traj.controls[k];
        const auto& m = traj.monitors[k];
        out << detail::fmt17(traj.times[k]) << ',' << detail::fmt17(s.E) << ','
            << detail::fmt17(s.Q) << ',' << detail::fmt17(s.P) << ','
            << detail::fmt17(c.u) << ',' << detail::fmt17(c.n) << ','
            << detail::fmt17(m.objective) << ',' << detail::fmt17(m.lyapunov_v1) << ','
            << detail::fmt17(m.speed) << '\n';
    }
}

} // namespace qosc
