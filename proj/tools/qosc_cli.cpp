// Command-line front end: scenario simulation with CSV/SVG/report output,
// registry listing, and certificate-only verification.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qosc/analysis.hpp"
#include "qosc/config.hpp"
#include "qosc/report.hpp"
#include "qosc/scenarios.hpp"

namespace {

qosc::Scenario resolve_scenario(const std::string& name,
                                const std::vector<std::string>& overrides) {
    if (auto sc = qosc::find_scenario(name)) {
        qosc::apply_overrides(*sc, overrides);
        return *sc;
    }
    if (std::filesystem::exists(name)) return qosc::load_config(name, overrides);
    throw qosc::ConfigError("'" + name +
                            "' is neither a registry scenario id nor a config file "
                            "(try 'list-scenarios')");
}

nlohmann::ordered_json certificates_json(const qosc::Scenario& sc) {
    using namespace qosc;
    const Target target = sc.target();
    nlohmann::ordered_json j;
    j["scenario"] = sc.id;
    j["e_star"] = target.e_star;
    j["n_star"] = target.n_star;

    j["positivity"] = nlohmann::ordered_json::array();
    for (double e0 : sc.initial_energies) {
        nlohmann::ordered_json pj;
        pj["e0"] = e0;
        if (e0 == target.e_star) {
            pj["mode"] = "none";
        } else {
            const TransferMode mode =
                e0 < target.e_star ? TransferMode::Heating : TransferMode::Cooling;
            const PositivityVerdict v =
                check_positivity(mode, e0, target.e_star, sc.params.omega0, sc.gains.gamma2);
            pj["mode"] = mode == TransferMode::Heating ? "heating" : "cooling";
            pj["gamma2_max"] = v.gamma2_max;
            pj["alpha"] = v.alpha;
            pj["satisfied"] = v.satisfied;
            if (mode == TransferMode::Cooling)
                pj["cooling_floor"] = cooling_floor(v.alpha, e0);
        }
        j["positivity"].push_back(std::move(pj));
    }

    if (sc.law == ControlLaw::SgaDr)
        j["dr_stability_condition_holds"] =
            stability_condition_dr(sc.params.gamma, sc.gains.gamma1, sc.gains.gamma2);

    const double gamma0 = sc.params.gamma / 2.0;
    const Eigen::Matrix2d r = lyapunov_matrix(sc.params, gamma0);
    j["pq_lyapunov"] = {{"gamma0", gamma0},
                        {"R", {r(0, 0), r(0, 1), r(1, 1)}},
                        {"verified", is_lyapunov_certificate(r, sc.params, gamma0)}};
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Speed-gradient energy control of a damped quantum oscillator"};
    app.require_subcommand(1);

    std::string name;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::optional<int> oracle_dim;
    std::optional<double> sample_interval;

    auto* sim = app.add_subcommand("simulate", "run a scenario and write CSV/SVG/report");
    sim->add_option("scenario", name, "registry id or config file path")->required();
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--oracle", oracle_dim, "enable the master-equation oracle (Fock dim)");
    sim->add_option("--sample-interval", sample_interval, "zero-order-hold interval");
    sim->add_option("--set", overrides, "override a config key, e.g. controller.gamma2=30");

    auto* list = app.add_subcommand("list-scenarios", "print the registry");

    auto* verify = app.add_subcommand("verify", "evaluate certificates without simulating");
    verify->add_option("scenario", name, "registry id or config file path")->required();
    verify->add_option("--set", overrides, "override a config key");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& sc : qosc::scenario_registry())
                std::printf("%-20s %-22s e_star=%-5g runs=%zu%s\n", sc.id.c_str(),
                            qosc::control_law_name(sc.law), sc.e_star,
                            sc.initial_energies.size(),
                            sc.sample_interval ? "  (sampled)" : "");
            return 0;
        }

        qosc::Scenario sc = resolve_scenario(name, overrides);
        if (verify->parsed()) {
            std::cout << certificates_json(sc).dump(2) << '\n';
            return 0;
        }

        if (oracle_dim) sc.oracle_dim = *oracle_dim;
        if (sample_interval) sc.sample_interval = *sample_interval;
        sc.validate();

        const qosc::RunReport report = qosc::run_scenario(sc, out_dir);
        for (const auto& run : report.runs) {
            std::printf("%s e0=%g status=%s |E(T)-E*|=%.3e min_n=%.3e\n",
                        sc.id.c_str(), run.e0, run.status.c_str(), run.terminal_error,
                        run.min_n);
            if (!run.message.empty()) std::printf("  %s\n", run.message.c_str());
        }
        std::printf("report: %s\n",
                    (std::filesystem::path(out_dir) / sc.id / "report.json").string().c_str());
        return report.exit_code();
    } catch (const qosc::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qosc::SimulationBlowup& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const qosc::OracleIntegrityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
