#include "rmc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>

#include "rmc/attractor.hpp"
#include "rmc/export.hpp"
#include "rmc/scenario.hpp"
#include "rmc/verification.hpp"

namespace rmc::cli {

namespace {

struct Options {
    std::string config;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
};

class OperationFailed : public Error {
public:
    OperationFailed(const std::string& op, const std::string& what) : Error(op + " failed: " + what) {}
};

template <class Fn>
auto guarded(const char* op, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw OperationFailed(op, e.what());
    }
}

Scenario load(const Options& o) {
    Scenario s = load_scenario(o.config);
    if (o.seed) s.driver.seed = *o.seed;
    if (o.out_dir) s.output.directory = *o.out_dir;
    return s;
}

void report_written(std::ostream& out, const std::vector<std::filesystem::path>& paths) {
    for (const auto& p : paths) out << "wrote " << p.string() << "\n";
}

int simulate(const Scenario& s, std::ostream& out) {
    const DrivingSystem d = guarded("make_driver", [&] { return make_driver(s); });
    const auto p0 = s.integrator.initial.empty() ? ProbabilityVector::barycenter(s.N).values() : s.integrator.initial;
    const Trajectory traj = guarded("integrate_rde", [&] {
        return integrate_rde(d, p0, s.integrator.t0, s.integrator.t1, s.integrator.step, s.integrator.sample_every);
    });
    out << "simulate: " << traj.times.size() << " samples, mass drift " << format_double(traj.mass_drift) << "\n";
    report_written(out, write_artifact(s.output.directory, "trajectory", s.output.formats,
                                       trajectory_artifact(traj, artifact_meta(s, s.driver.seed))));
    return kExitOk;
}

int attractor(const Scenario& s, std::ostream& out) {
    const DrivingSystem d = guarded("make_driver", [&] { return make_driver(s); });
    const AttractorPath path = guarded("attractor_path", [&] {
        return attractor_path(d, s.attractor.times, s.attractor.T, s.attractor.tol, s.integrator.step);
    });
    out << "attractor: " << path.times.size() << " points, max diameter " << format_double(path.final_diameter)
        << (path.converged ? " (converged)" : " (not converged)") << "\n";
    report_written(out, write_artifact(s.output.directory, "attractor", s.output.formats,
                                       attractor_artifact(path, artifact_meta(s, s.driver.seed))));
    return kExitOk;
}

int contraction(const Scenario& s, std::ostream& out) {
    const DrivingSystem d = guarded("make_driver", [&] { return make_driver(s); });
    std::vector<ContractionReport> reports;
    for (double T_c : s.attractor.T_c) {
        reports.push_back(guarded("estimate_contraction", [&] {
            return estimate_contraction(d, T_c, s.attractor.n_pairs, s.driver.seed, s.integrator.step);
        }));
        out << "contraction: T_c=" << format_double(T_c) << " lambda=" << format_double(reports.back().lambda_estimate)
            << "\n";
    }
    report_written(out, write_artifact(s.output.directory, "contraction", s.output.formats,
                                       contraction_artifact(reports, artifact_meta(s, s.driver.seed))));
    return kExitOk;
}

int compare_euler(const Scenario& s, std::ostream& out) {
    const DrivingSystem d = guarded("make_driver", [&] { return make_driver(s); });
    const auto rows = guarded("euler_attractor_comparison", [&] {
        return euler_attractor_comparison(d, s.attractor.deltas, s.attractor.T, s.attractor.tol, s.integrator.step);
    });
    for (const auto& r : rows) {
        out << "compare-euler: delta=" << format_double(r.delta) << " distance=" << format_double(r.distance) << "\n";
    }
    report_written(out, write_artifact(s.output.directory, "euler", s.output.formats,
                                       euler_artifact(rows, artifact_meta(s, s.driver.seed))));
    return kExitOk;
}

int verify(const Scenario& s, std::ostream& out) {
    std::vector<DrivingSystem> drivers;
    for (std::size_t k = 0; k < s.verify.seeds; ++k) {
        drivers.push_back(guarded("make_driver", [&] { return make_driver(s, s.driver.seed + k); }));
    }
    const auto checks = guarded("run_invariant_suite", [&] { return run_invariant_suite(drivers, suite_settings(s)); });
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(20) << c.name
            << " value=" << format_double(c.value) << " threshold=" << format_double(c.threshold);
        if (!c.detail.empty()) out << "  " << c.detail;
        out << "\n";
    }
    out << "verify: " << std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.passed; }) << "/"
        << checks.size() << " checks passed over " << drivers.size() << " seed(s)\n";
    report_written(out, write_artifact(s.output.directory, "verify", s.output.formats,
                                       verify_artifact(checks, artifact_meta(s, s.driver.seed))));
    return all ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random Markov chains with tridiagonal generators", "rmc"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", tool_version());

    Options opts;
    using Handler = int (*)(const Scenario&, std::ostream&);
    const std::vector<std::tuple<const char*, const char*, Handler>> commands{
        {"simulate", "Integrate one trajectory and write it", simulate},
        {"attractor", "Compute the pullback attractor path", attractor},
        {"contraction", "Estimate the Hilbert-metric contraction ratio", contraction},
        {"compare-euler", "Compare Euler-chain and continuous pullback points", compare_euler},
        {"verify", "Run the invariant suite and report pass/fail per check", verify},
    };
    for (const auto& [name, help, fn] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "Scenario file (YAML)")->required();
        sub->add_option("--out", opts.out_dir, "Output directory (overrides output.directory)");
        sub->add_option("--seed", opts.seed, "Driver seed (overrides driver.seed)");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "rmc: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const auto* chosen = app.get_subcommands().front();
    const auto it = std::find_if(commands.begin(), commands.end(),
                                 [&](const auto& c) { return chosen->get_name() == std::get<0>(c); });
    try {
        const Scenario s = load(opts);
        return std::get<2>(*it)(s, out);
    } catch (const ConfigError& e) {
        err << "rmc " << chosen->get_name() << ": config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "rmc " << chosen->get_name() << ": " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace rmc::cli
