#pragma once

// Scenario configuration files: a small TOML-style key-value tree with
// [sections], scalar values, and flat numeric arrays. Unknown keys are
// rejected. CLI overrides reuse the same "section.key=value" grammar.

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qosc/errors.hpp"
#include "qosc/integrate.hpp"

namespace qosc {
namespace config {

struct Value {
    enum class Kind { Number, Boolean, String, NumberList } kind = Kind::Number;
    double num = 0.0;
    bool flag = false;
    std::string str;
    std::vector<double> list;
    int line = 0; ///< 0 for CLI overrides
};

using Entries = std::map<std::string, Value>; // key is "section.name"

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& tok, int line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line) +
                          ": expected a number, got '" + tok + "'");
    }
    if (used != tok.size())
        throw ConfigError("config line " + std::to_string(line) +
                          ": trailing characters in number '" + tok + "'");
    return v;
}

inline Value parse_value(const std::string& raw, int line) {
    Value v;
    v.line = line;
    const std::string tok = trim(raw);
    if (tok.empty())
        throw ConfigError("config line " + std::to_string(line) + ": missing value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw ConfigError("config line " + std::to_string(line) +
                              ": unterminated string");
        v.kind = Value::Kind::String;
        v.str = tok.substr(1, tok.size() - 2);
        return v;
    }
    if (tok == "true" || tok == "false") {
        v.kind = Value::Kind::Boolean;
        v.flag = (tok == "true");
        return v;
    }
    if (tok.front() == '[') {
        if (tok.back() != ']')
            throw ConfigError("config line " + std::to_string(line) +
                              ": unterminated array");
        v.kind = Value::Kind::NumberList;
        std::string body = tok.substr(1, tok.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty())
                throw ConfigError("config line " + std::to_string(line) +
                                  ": empty array element");
            v.list.push_back(parse_number(item, line));
        }
        if (v.list.empty())
            throw ConfigError("config line " + std::to_string(line) + ": empty array");
        return v;
    }
    v.kind = Value::Kind::Number;
    v.num = parse_number(tok, line);
    return v;
}

} // namespace detail

/// Parses the file into a flat "section.key" -> value map.
inline Entries parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    Entries entries;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip comments outside strings.
        bool in_str = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_str = !in_str;
            if (line[i] == '#' && !in_str) {
                line.erase(i);
                break;
            }
        }
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = detail::trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": empty section name");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string key = detail::trim(t.substr(0, eq));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (entries.count(full))
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": duplicate key '" + full + "'");
        entries[full] = detail::parse_value(t.substr(eq + 1), lineno);
    }
    return entries;
}

/// Applies a CLI "section.key=value" override on top of parsed entries.
inline void apply_override(Entries& entries, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must have the form key=value: " + assignment);
    const std::string key = detail::trim(assignment.substr(0, eq));
    entries[key] = detail::parse_value(assignment.substr(eq + 1), 0);
}

struct PresenceFlags {
    bool energy = false;
    bool law = false;
    bool e_star = false;
};

/// Applies parsed entries onto a scenario, rejecting unknown keys.
inline void apply_entries(Scenario& sc, const Entries& entries,
                          PresenceFlags* flags = nullptr) {
    bool have_energy = false;
    bool have_law = false;
    bool have_estar = false;

    for (const auto& [key, v] : entries) {
        auto want = [&](Value::Kind k, const char* what) {
            if (v.kind != k)
                throw ConfigError("config key '" + key + "': expected " + what);
        };
        auto num = [&]() {
            want(Value::Kind::Number, "a number");
            return v.num;
        };
        auto flag = [&]() {
            want(Value::Kind::Boolean, "true or false");
            return v.flag;
        };

        if (key == "id") {
            want(Value::Kind::String, "a string");
            sc.id = v.str;
        } else if (key == "oscillator.omega0") {
            sc.params.omega0 = num();
        } else if (key == "oscillator.gamma") {
            sc.params.gamma = num();
        } else if (key == "initial.energy") {
            sc.initial_energies = {num()};
            have_energy = true;
        } else if (key == "initial.energies") {
            want(Value::Kind::NumberList, "an array of numbers");
            sc.initial_energies = v.list;
            have_energy = true;
        } else if (key == "initial.q") {
            sc.q0 = num();
        } else if (key == "initial.p") {
            sc.p0 = num();
        } else if (key == "controller.law") {
            want(Value::Kind::String, "a string");
            sc.law = control_law_from_name(v.str);
            have_law = true;
        } else if (key == "controller.e_star") {
            sc.e_star = num();
            have_estar = true;
        } else if (key == "controller.gamma1") {
            sc.gains.gamma1 = num();
        } else if (key == "controller.gamma2") {
            sc.gains.gamma2 = num();
        } else if (key == "controller.alpha1") {
            sc.gains.alpha1 = num();
        } else if (key == "controller.alpha2") {
            sc.gains.alpha2 = num();
        } else if (key == "controller.kappa") {
            sc.gains.kappa = num();
        } else if (key == "controller.gamma_fin") {
            sc.gains.gamma_fin = num();
        } else if (key == "controller.u0") {
            sc.u0 = num();
        } else if (key == "controller.n0") {
            sc.n0 = num();
        } else if (key == "controller.dr_use_tilde") {
            sc.dr_use_tilde = flag();
        } else if (key == "simulation.t_final") {
            sc.t_final = num();
        } else if (key == "simulation.h_int") {
            sc.h_int = num();
        } else if (key == "simulation.sample_interval") {
            sc.sample_interval = num();
        } else if (key == "simulation.literal_paper_update") {
            sc.literal_paper_update = flag();
        } else if (key == "simulation.clamp_n") {
            sc.clamp_n = flag();
        } else if (key == "oracle.dim") {
            sc.oracle_dim = static_cast<int>(num());
        } else {
            throw ConfigError("config line " + std::to_string(v.line) +
                              ": unknown key '" + key + "'");
        }
    }

    if (flags) {
        flags->energy |= have_energy;
        flags->law |= have_law;
        flags->e_star |= have_estar;
    }
}

/// Validates keys and assembles a Scenario from a parsed file.
inline Scenario build_scenario(const Entries& entries, const std::string& default_id) {
    Scenario sc;
    sc.id = default_id;
    PresenceFlags flags;
    apply_entries(sc, entries, &flags);
    if (!flags.energy)
        throw ConfigError("config: initial.energy (or initial.energies) is mandatory");
    if (!flags.law)
        throw ConfigError("config: controller.law is mandatory");
    if (!flags.e_star)
        throw ConfigError("config: controller.e_star is mandatory");
    sc.validate();
    return sc;
}

} // namespace config

/// Applies CLI "section.key=value" overrides to an already-built scenario.
inline void apply_overrides(Scenario& sc, const std::vector<std::string>& overrides) {
    if (overrides.empty()) return;
    config::Entries entries;
    for (const auto& o : overrides) config::apply_override(entries, o);
    config::apply_entries(sc, entries);
    sc.validate();
}

/// Loads and validates a scenario file, with optional CLI overrides.
inline Scenario load_config(const std::string& path,
                            const std::vector<std::string>& overrides = {}) {
    config::Entries entries = config::parse_file(path);
    for (const auto& o : overrides) config::apply_override(entries, o);
    std::string stem = path;
    if (const auto slash = stem.find_last_of("/\\"); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (const auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return config::build_scenario(entries, stem);
}

} // namespace qosc
