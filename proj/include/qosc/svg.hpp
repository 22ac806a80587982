#pragma once

// Minimal standalone SVG renderer for run results. Single-trajectory
// figures draw E (red), n (green), u (blue); multi-trajectory figures draw
// one E curve per run.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qosc/trajectory.hpp"

namespace qosc {

struct FigureStyle {
    int width = 900;
    int height = 540;
    std::string title;
    std::size_t max_points = 2000; ///< per-series downsampling cap
};

namespace detail {

inline std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Series {
    std::string color;
    std::string label;
    std::vector<double> t, y;
};

inline std::string render_svg(const std::vector<Series>& series, const FigureStyle& style) {
    const double ml = 60.0, mr = 20.0, mt = style.title.empty() ? 20.0 : 40.0, mb = 45.0;
    const double pw = style.width - ml - mr;
    const double ph = style.height - mt - mb;

    double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
    double ymin = tmin, ymax = -tmin;
    for (const auto& s : series) {
        for (double v : s.t) {
            tmin = std::min(tmin, v);
            tmax = std::max(tmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(tmax > tmin)) tmax = tmin + 1.0;
    if (!(ymax > ymin)) {
        ymax = ymin + 0.5;
        ymin -= 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * pw; };
    auto sy = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width
        << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width << " "
        << style.height << "\">\n"
        << "<rect width=\"" << style.width << "\" height=\"" << style.height
        << "\" fill=\"white\"/>\n";

    // Axes.
    out << "<line x1=\"" << fmt_coord(ml) << "\" y1=\"" << fmt_coord(mt + ph)
        << "\" x2=\"" << fmt_coord(ml + pw) << "\" y2=\"" << fmt_coord(mt + ph)
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << fmt_coord(ml) << "\" y1=\"" << fmt_coord(mt) << "\" x2=\""
        << fmt_coord(ml) << "\" y2=\"" << fmt_coord(mt + ph) << "\" stroke=\"black\"/>\n";

    char buf[64];
    auto label = [&](double x, double y, const std::string& text, const char* anchor) {
        out << "<text x=\"" << fmt_coord(x) << "\" y=\"" << fmt_coord(y)
            << "\" font-size=\"12\" text-anchor=\"" << anchor << "\">" << text
            << "</text>\n";
    };
    std::snprintf(buf, sizeof buf, "%g", tmin);
    label(ml, mt + ph + 18.0, buf, "middle");
    std::snprintf(buf, sizeof buf, "%g", tmax);
    label(ml + pw, mt + ph + 18.0, buf, "middle");
    std::snprintf(buf, sizeof buf, "%.3g", ymin);
    label(ml - 6.0, mt + ph, buf, "end");
    std::snprintf(buf, sizeof buf, "%.3g", ymax);
    label(ml - 6.0, mt + 10.0, buf, "end");
    label(ml + pw / 2.0, mt + ph + 35.0, "t", "middle");
    if (!style.title.empty()) label(ml + pw / 2.0, mt - 14.0, style.title, "middle");

    double lx = ml + 10.0;
    for (const auto& s : series) {
        const std::size_t n = s.t.size();
        const std::size_t stride = std::max<std::size_t>(1, n / style.max_points);
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < n; k += stride)
            out << fmt_coord(sx(s.t[k])) << ',' << fmt_coord(sy(s.y[k])) << ' ';
        if ((n - 1) % stride != 0)
            out << fmt_coord(sx(s.t[n - 1])) << ',' << fmt_coord(sy(s.y[n - 1]));
        out << "\"/>\n";
        if (!s.label.empty()) {
            out << "<text x=\"" << fmt_coord(lx) << "\" y=\"" << fmt_coord(mt + 14.0)
                << "\" font-size=\"12\" fill=\"" << s.color << "\">" << s.label
                << "</text>\n";
            lx += 60.0;
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace detail

inline std::string emit_figure(const std::vector<Trajectory>& trajectories,
                               const FigureStyle& style = {}) {
    if (trajectories.empty())
        throw std::invalid_argument("emit_figure: no trajectories");
    std::vector<detail::Series> series;
    if (trajectories.size() == 1) {
        const auto& tr = trajectories.front();
        detail::Series e{"red", "E", tr.times, {}};
        detail::Series n{"green", "n", tr.times, {}};
        detail::Series u{"blue", "u", tr.times, {}};
        for (std::size_t k = 0; k < tr.size(); ++k) {
            e.y.push_back(tr.states[k].E);
            n.y.push_back(tr.controls[k].n);
            u.y.push_back(tr.controls[k].u);
        }
        series = {std::move(e), std::move(n), std::move(u)};
    } else {
        static const char* palette[] = {"black", "blue", "green", "orange", "red",
                                        "purple", "brown", "teal"};
        for (std::size_t i = 0; i < trajectories.size(); ++i) {
            const auto& tr = trajectories[i];
            detail::Series s{palette[i % 8], i == 0 ? "E" : "", tr.times, {}};
            for (const auto& st : tr.states) s.y.push_back(st.E);
            series.push_back(std::move(s));
        }
    }
    return detail::render_svg(series, style);
}

} // namespace qosc
