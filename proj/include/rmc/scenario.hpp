#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmc/driving.hpp"
#include "rmc/error.hpp"
#include "rmc/verification.hpp"

namespace rmc {

/// Invalid or inconsistent scenario file; message is anchored as "<file>:<line>: <key>: ...".
class ConfigError : public Error {
public:
    ConfigError(const std::string& source, int line, const std::string& key, const std::string& what);

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

struct DriverSpec {
    DriverModel model = DriverModel::constant;
    std::uint64_t seed = 0;
    std::vector<double> lower_bounds;
    std::vector<double> upper_bounds;
    /// periodic only; empty means "draw from seed"
    double period = 0.0;
    std::vector<double> phases;
    /// telegraph only
    double mean_holding_time = 0.0;

    bool operator==(const DriverSpec&) const = default;
};

struct IntegratorSpec {
    double step = 1e-3;
    double sample_every = 0.1;
    double t0 = 0.0;
    double t1 = 10.0;
    /// simulate start; empty means the barycenter
    std::vector<double> initial;

    bool operator==(const IntegratorSpec&) const = default;
};

struct AttractorSpec {
    double T = 40.0;
    double tol = 1e-8;
    std::vector<double> times{0.0};
    std::vector<double> T_c{0.5, 1.0, 2.0, 4.0};
    std::size_t n_pairs = 200;
    std::vector<double> deltas{0.1, 0.05, 0.025};

    bool operator==(const AttractorSpec&) const = default;
};

struct VerifySpec {
    /// realizations use seeds seed, seed+1, ..., seed+seeds-1
    std::size_t seeds = 1;
    /// pullback horizon of the attractor path used by the invariance and forward-attraction checks
    double path_horizon = 60.0;

    bool operator==(const VerifySpec&) const = default;
};

struct OutputSpec {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json"};

    bool operator==(const OutputSpec&) const = default;
};

struct Scenario {
    std::string name;
    std::size_t N = 0;
    DriverSpec driver;
    IntegratorSpec integrator;
    AttractorSpec attractor;
    VerifySpec verify;
    OutputSpec output;

    bool operator==(const Scenario&) const = default;
};

/// Reads and validates a YAML scenario file (JSON is accepted as a YAML subset).
Scenario load_scenario(const std::string& path);
/// Same as load_scenario on in-memory text; `source` names the text in error messages.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");

/// Normalized YAML with every key present and doubles at round-trip precision.
std::string to_yaml(const Scenario& s);

/// 16 hex digits of FNV-1a over the normalized YAML, output section excluded.
std::string scenario_hash(const Scenario& s);

DrivingSystem make_driver(const Scenario& s);
DrivingSystem make_driver(const Scenario& s, std::uint64_t seed);

/// Invariant-suite settings derived from the scenario's integrator and attractor sections.
SuiteSettings suite_settings(const Scenario& s);

}  // namespace rmc
