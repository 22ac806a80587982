#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "qosc/model.hpp"

namespace qosc {

/// Per-sample diagnostic values recorded along a run.
struct MonitorSample {
    double objective = 0.0;   ///< W(E)
    double lyapunov_v1 = 0.0; ///< V1, NaN when the gains do not define it
    double speed = 0.0;       ///< goal_speed
};

/// Uniformly sampled closed-loop run: states, applied controls, monitors.
struct Trajectory {
    std::vector<double> times;
    std::vector<MeanState> states;
    std::vector<ControlInput> controls;
    std::vector<MonitorSample> monitors;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }

    double min_n() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& c : controls) m = std::min(m, c.n);
        return m;
    }
};

} // namespace qosc
