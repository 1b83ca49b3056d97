#include "rmc/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmc/error.hpp"

#ifndef RMC_VERSION
#define RMC_VERSION "0.0.0"
#endif

namespace rmc {

using nlohmann::ordered_json;

namespace {

std::string csv_preamble(const ArtifactMeta& m) {
    std::ostringstream os;
    os << "# scenario=" << m.scenario << " hash=" << m.hash << " seed=" << m.seed << " N=" << m.n
       << " version=" << m.version << "\n";
    return os.str();
}

ordered_json metadata(const ArtifactMeta& m) {
    return ordered_json{{"scenario", m.scenario}, {"hash", m.hash}, {"seed", m.seed},
                        {"N", m.n},               {"version", m.version}};
}

// JSON has no infinities; they are written as null.
ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json numbers(const std::vector<double>& v) {
    auto a = ordered_json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

void append_row(std::string& out, const std::vector<double>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_double(row[i]);
    }
    out += '\n';
}

std::string state_header(const char* first, const char* prefix, std::size_t n) {
    std::string h = first;
    for (std::size_t i = 1; i <= n; ++i) h += std::string(",") + prefix + std::to_string(i);
    return h;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string tool_version() { return RMC_VERSION; }

ArtifactMeta artifact_meta(const Scenario& s, std::uint64_t seed) {
    return {s.name, scenario_hash(s), seed, s.N, tool_version()};
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Artifact trajectory_artifact(const Trajectory& traj, const ArtifactMeta& meta) {
    Artifact a;
    a.csv = csv_preamble(meta) + state_header("t", "p_", meta.n) + "\n";
    auto states = ordered_json::array();
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<double> row{traj.times[k]};
        row.insert(row.end(), traj.states[k].begin(), traj.states[k].end());
        append_row(a.csv, row);
        states.push_back(numbers(traj.states[k]));
    }
    ordered_json j{{"metadata", metadata(meta)},
                   {"trajectory",
                    {{"times", numbers(traj.times)}, {"states", states}, {"mass_drift", number(traj.mass_drift)}}}};
    a.json = dump(j);
    return a;
}

Artifact attractor_artifact(const AttractorPath& path, const ArtifactMeta& meta) {
    Artifact a;
    a.csv = csv_preamble(meta) + state_header("t", "a_", meta.n) + ",diameter\n";
    auto points = ordered_json::array();
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        std::vector<double> row{path.times[k]};
        const auto& p = path.points[k].values();
        row.insert(row.end(), p.begin(), p.end());
        row.push_back(path.diameters[k]);
        append_row(a.csv, row);
        points.push_back(numbers(p));
    }
    ordered_json j{{"metadata", metadata(meta)},
                   {"attractor_path",
                    {{"times", numbers(path.times)},
                     {"points", points},
                     {"diameters", numbers(path.diameters)},
                     {"pullback_horizon", path.pullback_horizon},
                     {"tolerance", path.tolerance},
                     {"final_diameter", number(path.final_diameter)},
                     {"converged", path.converged}}}};
    a.json = dump(j);
    return a;
}

Artifact contraction_artifact(const std::vector<ContractionReport>& reports, const ArtifactMeta& meta) {
    Artifact a;
    a.csv = csv_preamble(meta) + "T_c,lambda_estimate,n_pairs,n_used\n";
    auto arr = ordered_json::array();
    for (const auto& r : reports) {
        a.csv += format_double(r.T_c) + "," + format_double(r.lambda_estimate) + "," + std::to_string(r.n_pairs) +
                 "," + std::to_string(r.n_used) + "\n";
        arr.push_back({{"T_c", r.T_c},
                       {"lambda_estimate", number(r.lambda_estimate)},
                       {"n_pairs", r.n_pairs},
                       {"n_used", r.n_used},
                       {"max_ratio_pair", {numbers(r.max_ratio_pair.first), numbers(r.max_ratio_pair.second)}}});
    }
    a.json = dump({{"metadata", metadata(meta)}, {"contraction", arr}});
    return a;
}

Artifact euler_artifact(const std::vector<EulerComparison>& rows, const ArtifactMeta& meta) {
    Artifact a;
    a.csv = csv_preamble(meta) + "delta,distance\n";
    auto arr = ordered_json::array();
    for (const auto& r : rows) {
        append_row(a.csv, {r.delta, r.distance});
        arr.push_back({{"delta", r.delta}, {"distance", number(r.distance)}, {"discrete_point", numbers(r.discrete_point)}});
    }
    a.json = dump({{"metadata", metadata(meta)}, {"euler_comparison", arr}});
    return a;
}

Artifact verify_artifact(const std::vector<CheckResult>& checks, const ArtifactMeta& meta) {
    Artifact a;
    a.csv = csv_preamble(meta) + "check,passed,value,threshold\n";
    auto arr = ordered_json::array();
    for (const auto& c : checks) {
        a.csv += c.name + "," + (c.passed ? "1" : "0") + "," + format_double(c.value) + "," +
                 format_double(c.threshold) + "\n";
        arr.push_back({{"name", c.name},
                       {"passed", c.passed},
                       {"value", number(c.value)},
                       {"threshold", number(c.threshold)},
                       {"detail", c.detail}});
    }
    a.json = dump({{"metadata", metadata(meta)}, {"checks", arr}});
    return a;
}

std::vector<std::filesystem::path> write_artifact(const std::filesystem::path& dir, const std::string& stem,
                                                  const std::vector<std::string>& formats, const Artifact& a) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& f : formats) {
        const auto path = dir / (stem + "." + f);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << (f == "csv" ? a.csv : a.json);
        if (!out) throw Error("write failed for " + path.string());
        written.push_back(path);
    }
    return written;
}

}  // namespace rmc
