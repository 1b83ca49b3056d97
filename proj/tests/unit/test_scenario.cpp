#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rmc/scenario.hpp"

using namespace rmc;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text, "cfg.yaml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("minimal constant scenario gets defaults") {
    const auto s = parse_scenario("name: tiny\nN: 2\ndriver:\n  model: constant\n  values: [1, 2]\n");
    CHECK(s.N == 2);
    CHECK(s.driver.model == DriverModel::constant);
    CHECK(s.driver.lower_bounds == std::vector<double>{1, 2});
    CHECK(s.driver.upper_bounds == std::vector<double>{1, 2});
    CHECK(s.integrator.step == 1e-3);
    CHECK(s.attractor.T == 40.0);
    CHECK(s.attractor.tol == 1e-8);
    CHECK(s.verify.seeds == 1);
    CHECK(s.output.formats == std::vector<std::string>{"csv", "json"});
    const auto d = make_driver(s);
    CHECK(coefficients_at(d, 3.0).values == std::vector<double>{1, 2});
}

TEST_CASE("zero lower bound names the constraint, key and line") {
    const auto msg = error_of(
        "name: x\nN: 2\ndriver:\n  model: telegraph\n  lower_bounds: [0.5, 0]\n  upper_bounds: 2\n"
        "  mean_holding_time: 1\n");
    CHECK(contains(msg, "0<c_*"));
    CHECK(contains(msg, "cfg.yaml:5:"));
    CHECK(contains(msg, "driver.lower_bounds[1]"));
}

TEST_CASE("missing and invalid keys are named") {
    CHECK(contains(error_of("N: 2\ndriver:\n  model: constant\n  values: [1, 1]\n"), "name: missing"));
    CHECK(contains(error_of("name: x\ndriver:\n  model: constant\n  values: [1, 1]\n"), "N: missing"));
    CHECK(contains(error_of("name: x\nN: 2\ndriver:\n  model: telegraph\n  lower_bounds: 1\n  upper_bounds: 2\n"),
                   "driver.mean_holding_time"));
    CHECK(contains(error_of("name: x\nN: two\ndriver:\n  model: constant\n  values: [1, 1]\n"), "cfg.yaml:2: N:"));
    CHECK(contains(error_of("name: x\nN: 2\ndriver:\n  model: wiener\n"), "driver.model"));
    CHECK(contains(error_of("name: x\nN: 2\ndriver:\n  model: constant\n  values: [1, 1, 1]\n"), "2N-2"));
    CHECK(contains(error_of("name: x\nN: 2\ndriver:\n  model: constant\n  values: [1, 1]\nattractor:\n  Tc: [1]\n"),
                   "attractor.Tc: unknown key"));
    CHECK(contains(error_of("name: x\nN: 2\ndriver:\n  model: telegraph\n  lower_bounds: 3\n  upper_bounds: 2\n"
                            "  mean_holding_time: 1\n"),
                   "c_*<=C_*"));
    CHECK(contains(error_of("name: x\nN: 2\ndriver:\n  model: constant\n  values: [1, 1]\nattractor:\n"
                            "  deltas: [0.9]\n"),
                   "attractor.deltas"));
    CHECK(contains(error_of("name: x\nN: 2\ndriver:\n  model: constant\n  values: [1, 1]\nintegrator:\n"
                            "  initial: [0.5, 0.6]\n"),
                   "integrator.initial"));
    CHECK(contains(error_of("name: [unclosed\n"), "cfg.yaml:"));
}

TEST_CASE("normalized YAML reloads to an identical scenario") {
    for (const char* file : {"reference.yaml", "periodic.yaml", "constant_two_state.yaml"}) {
        const auto s = load_scenario(std::string(RMC_SCENARIO_DIR) + "/" + file);
        const auto again = parse_scenario(to_yaml(s));
        CAPTURE(file);
        CHECK(again == s);
        CHECK(to_yaml(again) == to_yaml(s));
        CHECK(scenario_hash(again) == scenario_hash(s));
    }
}

TEST_CASE("awkward doubles survive the round trip") {
    auto s = parse_scenario("name: x\nN: 3\ndriver:\n  model: periodic\n  lower_bounds: 0.1\n"
                            "  upper_bounds: 0.30000000000000004\n  period: 3.14159\n"
                            "  phases: [0.1, 0.2, 0.3, 1e-300]\n");
    s.attractor.tol = 1.0 / 3.0;
    s.integrator.sample_every = 0.1 + 0.2;
    CHECK(parse_scenario(to_yaml(s)) == s);
}

TEST_CASE("hash changes with content") {
    auto s = load_scenario(std::string(RMC_SCENARIO_DIR) + "/reference.yaml");
    const auto h = scenario_hash(s);
    CHECK(h.size() == 16);
    auto moved = s;
    moved.output.directory = "elsewhere";
    CHECK(scenario_hash(moved) == h);
    s.driver.seed += 1;
    CHECK(scenario_hash(s) != h);
}

TEST_CASE("suite settings follow the scenario") {
    const auto s = load_scenario(std::string(RMC_SCENARIO_DIR) + "/reference.yaml");
    const auto st = suite_settings(s);
    CHECK(st.pullback_horizon == 40.0);
    CHECK(st.path_horizon == s.verify.path_horizon);
    CHECK(st.path_times.back() == 40.0);
    CHECK(st.contraction_times == s.attractor.T_c);
    CHECK(st.n_pairs == 200);
    CHECK(s.verify.seeds == 100);
}

TEST_CASE("unreadable file") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.yaml"), ConfigError);
}
