#pragma once

// Batch execution of a scenario: runs every initial energy (in parallel),
// writes trajectory CSVs, a combined SVG figure, and a machine-readable
// report with certificate verdicts.

#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qosc/analysis.hpp"
#include "qosc/csv.hpp"
#include "qosc/errors.hpp"
#include "qosc/integrate.hpp"
#include "qosc/lindblad.hpp"
#include "qosc/svg.hpp"

namespace qosc {

inline constexpr int kReportSchemaVersion = 1;

/// Per-trajectory comparison against the master-equation oracle.
struct OracleSummary {
    int dim = 0;
    double max_abs_de = 0.0;
    double max_abs_dq = 0.0;
    double max_abs_dp = 0.0;
    double max_trace_drift = 0.0;
    double max_hermiticity_residual = 0.0;
    double min_eigenvalue = 1.0;
    double max_tail_mass = 0.0;
};

struct RunResult {
    double e0 = 0.0;
    std::string status = "ok"; ///< ok | blow-up | oracle-integrity | error
    std::string message;
    double terminal_error = 0.0; ///< |E(t_final) - E*|
    double min_n = 0.0;
    std::optional<PositivityVerdict> positivity;
    std::optional<RateFit> rate_fit;
    std::optional<OracleSummary> oracle;
    std::string trajectory_csv; ///< path relative to the report
    Trajectory trajectory;      ///< kept in memory for figure rendering
};

struct RunReport {
    std::string scenario_id;
    Scenario scenario;
    std::vector<RunResult> runs;
    std::optional<bool> dr_stability_condition;
    std::string figure_svg; ///< relative path
    std::string report_json;

    bool ok() const {
        for (const auto& r : runs)
            if (r.status != "ok") return false;
        return true;
    }
    /// CLI exit code: 0 ok, 3 blow-up, 4 oracle integrity.
    int exit_code() const {
        for (const auto& r : runs) {
            if (r.status == "blow-up") return 3;
            if (r.status == "oracle-integrity") return 4;
        }
        return ok() ? 0 : 3;
    }
};

namespace detail {

inline RunResult execute_run(const Scenario& sc, double e0) {
    RunResult res;
    res.e0 = e0;
    const Target target = sc.target();
    try {
        res.trajectory = simulate(sc, e0);
        res.terminal_error = std::abs(res.trajectory.states.back().E - target.e_star);
        res.min_n = res.trajectory.min_n();

        if (e0 != target.e_star) {
            const TransferMode mode =
                e0 < target.e_star ? TransferMode::Heating : TransferMode::Cooling;
            res.positivity = check_positivity(mode, e0, target.e_star, sc.params.omega0,
                                              sc.gains.gamma2);
        }
        if (sc.law == ControlLaw::SgaDr)
            res.rate_fit = exponential_rate_fit(res.trajectory, target);

        if (sc.oracle_dim) {
            const OracleResult oracle = simulate_lindblad(sc, res.trajectory);
            OracleSummary sum;
            sum.dim = *sc.oracle_dim;
            for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
                const auto& a = res.trajectory.states[k];
                const auto& b = oracle.traj.states[k];
                sum.max_abs_de = std::max(sum.max_abs_de, std::abs(a.E - b.E));
                sum.max_abs_dq = std::max(sum.max_abs_dq, std::abs(a.Q - b.Q));
                sum.max_abs_dp = std::max(sum.max_abs_dp, std::abs(a.P - b.P));
            }
            sum.max_trace_drift = oracle.max_trace_drift;
            sum.max_hermiticity_residual = oracle.max_hermiticity_residual;
            sum.min_eigenvalue = oracle.min_eigenvalue;
            sum.max_tail_mass = oracle.max_tail_mass;
            res.oracle = sum;
        }
    } catch (const SimulationBlowup& e) {
        res.status = "blow-up";
        res.message = e.what();
    } catch (const OracleIntegrityError& e) {
        res.status = "oracle-integrity";
        res.message = e.what();
    } catch (const std::exception& e) {
        res.status = "error";
        res.message = e.what();
    }
    return res;
}

inline nlohmann::ordered_json scenario_json(const Scenario& sc) {
    nlohmann::ordered_json j;
    j["id"] = sc.id;
    j["omega0"] = sc.params.omega0;
    j["gamma"] = sc.params.gamma;
    j["law"] = control_law_name(sc.law);
    j["e_star"] = sc.e_star;
    j["initial_energies"] = sc.initial_energies;
    j["q0"] = sc.q0;
    j["p0"] = sc.p0;
    j["gains"] = {{"gamma1", sc.gains.gamma1}, {"gamma2", sc.gains.gamma2},
                  {"alpha1", sc.gains.alpha1}, {"alpha2", sc.gains.alpha2},
                  {"kappa", sc.gains.kappa},   {"gamma_fin", sc.gains.gamma_fin}};
    j["t_final"] = sc.t_final;
    j["h_int"] = sc.h_int;
    if (sc.sample_interval) j["sample_interval"] = *sc.sample_interval;
    if (sc.oracle_dim) j["oracle_dim"] = *sc.oracle_dim;
    j["dr_use_tilde"] = sc.dr_use_tilde;
    j["literal_paper_update"] = sc.literal_paper_update;
    j["clamp_n"] = sc.clamp_n;
    j["assumptions"] = "Q(0), P(0) taken from the scenario; registry default Q(0)=1, "
                       "P(0)=0 where the source study leaves them unspecified";
    return j;
}

} // namespace detail

inline nlohmann::ordered_json report_to_json(const RunReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["scenario"] = detail::scenario_json(report.scenario);
    if (report.dr_stability_condition)
        j["dr_stability_condition_holds"] = *report.dr_stability_condition;
    j["ok"] = report.ok();
    j["runs"] = nlohmann::ordered_json::array();
    for (const auto& r : report.runs) {
        nlohmann::ordered_json rj;
        rj["e0"] = r.e0;
        rj["status"] = r.status;
        if (!r.message.empty()) rj["message"] = r.message;
        rj["terminal_error"] = r.terminal_error;
        rj["min_n"] = r.min_n;
        if (r.positivity) {
            rj["positivity"] = {
                {"mode", r.positivity->mode == TransferMode::Heating ? "heating" : "cooling"},
                {"gamma2_max", r.positivity->gamma2_max},
                {"alpha", r.positivity->alpha},
                {"satisfied", r.positivity->satisfied}};
        }
        if (r.rate_fit) {
            rj["rate_fit"] = {{"rate", r.rate_fit->rate},
                              {"saturated", r.rate_fit->saturated},
                              {"rms_residual", r.rate_fit->rms_residual},
                              {"decay_span", r.rate_fit->decay_span}};
        }
        if (r.oracle) {
            rj["oracle"] = {{"dim", r.oracle->dim},
                            {"max_abs_dE", r.oracle->max_abs_de},
                            {"max_abs_dQ", r.oracle->max_abs_dq},
                            {"max_abs_dP", r.oracle->max_abs_dp},
                            {"max_trace_drift", r.oracle->max_trace_drift},
                            {"max_hermiticity_residual", r.oracle->max_hermiticity_residual},
                            {"min_eigenvalue", r.oracle->min_eigenvalue},
                            {"max_tail_mass", r.oracle->max_tail_mass}};
        }
        if (!r.trajectory_csv.empty()) rj["trajectory_csv"] = r.trajectory_csv;
        j["runs"].push_back(std::move(rj));
    }
    if (!report.figure_svg.empty()) j["figure_svg"] = report.figure_svg;
    return j;
}

/// Runs the scenario (all initial energies, one worker per run) and writes
/// trajectory.csv / trajectory_<k>.csv, figure.svg, and report.json under
/// out_dir/<scenario id>/.
inline RunReport run_scenario(const Scenario& sc, const std::filesystem::path& out_dir) {
    sc.validate();
    RunReport report;
    report.scenario_id = sc.id;
    report.scenario = sc;
    if (sc.law == ControlLaw::SgaDr)
        report.dr_stability_condition =
            stability_condition_dr(sc.params.gamma, sc.gains.gamma1, sc.gains.gamma2);

    std::vector<std::future<RunResult>> workers;
    workers.reserve(sc.initial_energies.size());
    for (double e0 : sc.initial_energies)
        workers.push_back(std::async(std::launch::async,
                                     [&sc, e0] { return detail::execute_run(sc, e0); }));
    for (auto& w : workers) report.runs.push_back(w.get());

    const std::filesystem::path dir = out_dir / sc.id;
    std::filesystem::create_directories(dir);

    const bool batch = report.runs.size() > 1;
    std::vector<Trajectory> ok_trajectories;
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        auto& run = report.runs[i];
        if (run.trajectory.empty()) continue;
        const std::string name =
            batch ? "trajectory_" + std::to_string(i) + ".csv" : "trajectory.csv";
        std::ofstream csv(dir / name, std::ios::binary);
        write_trajectory_csv(csv, run.trajectory);
        run.trajectory_csv = name;
        ok_trajectories.push_back(run.trajectory);
    }

    if (!ok_trajectories.empty()) {
        FigureStyle style;
        style.title = sc.id;
        std::ofstream svg(dir / "figure.svg", std::ios::binary);
        svg << emit_figure(ok_trajectories, style);
        report.figure_svg = "figure.svg";
    }

    std::ofstream json(dir / "report.json", std::ios::binary);
    json << report_to_json(report).dump(2) << '\n';
    report.report_json = "report.json";
    return report;
}

} // namespace qosc
