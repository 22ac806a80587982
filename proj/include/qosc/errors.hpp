#pragma once

#include <stdexcept>
#include <string>

namespace qosc {

/// Integration aborted because the state left the trusted numerical range.
class SimulationBlowup : public std::runtime_error {
public:
    SimulationBlowup(double time, const std::string& what)
        : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// The density-matrix oracle detected loss of trace, Hermiticity,
/// positivity, or Fock-truncation adequacy.
class OracleIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario configuration failed to parse or validate.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qosc
