#include "rmc/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rmc/generator.hpp"
#include "rmc/integrator.hpp"

namespace rmc {

ConfigError::ConfigError(const std::string& source, int line, const std::string& key, const std::string& what)
    : Error(source + ":" + std::to_string(line) + ": " + key + ": " + what), key_(key), line_(line) {}

namespace {

// Walks a YAML tree, remembering where each value came from for error messages.
class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& key, const std::string& what) const {
        const int line = at.IsDefined() ? at.Mark().line + 1 : 0;
        throw ConfigError(source_, line, key, what);
    }

    void expect_map(const YAML::Node& node, const std::string& key, std::initializer_list<const char*> allowed) const {
        if (!node.IsMap()) fail(node, key, "expected a mapping");
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& kv : node) {
            const auto name = kv.first.as<std::string>();
            if (!ok.contains(name)) fail(kv.first, join(key, name), "unknown key");
        }
    }

    template <class T>
    T scalar(const YAML::Node& node, const std::string& key) const {
        if (!node.IsScalar()) fail(node, key, "expected a scalar");
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, key, "invalid value '" + node.Scalar() + "'");
        }
    }

    double real(const YAML::Node& node, const std::string& key) const {
        const auto x = scalar<double>(node, key);
        if (!std::isfinite(x)) fail(node, key, "must be finite");
        return x;
    }

    std::vector<double> reals(const YAML::Node& node, const std::string& key) const {
        if (!node.IsSequence()) fail(node, key, "expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < node.size(); ++i) {
            out.push_back(real(node[i], key + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

    // scalar broadcast or explicit list of `count` numbers
    std::vector<double> per_coefficient(const YAML::Node& node, const std::string& key, std::size_t count) const {
        if (node.IsScalar()) return std::vector<double>(count, real(node, key));
        auto v = reals(node, key);
        if (v.size() != count) {
            fail(node, key, "expected " + std::to_string(count) + " values (2N-2), got " + std::to_string(v.size()));
        }
        return v;
    }

    static std::string join(const std::string& parent, const std::string& child) {
        return parent.empty() ? child : parent + "." + child;
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

void check_positive(const Reader& r, const YAML::Node& node, const std::string& key, double x) {
    if (!(x > 0.0)) r.fail(node, key, "must be positive");
}

void parse_driver(const Reader& r, const YAML::Node& node, Scenario& s) {
    r.expect_map(node, "driver",
                 {"model", "seed", "lower_bounds", "upper_bounds", "values", "period", "phases", "mean_holding_time"});
    DriverSpec& d = s.driver;
    if (!node["model"]) r.fail(node, "driver.model", "missing required key");
    try {
        d.model = parse_driver_model(r.scalar<std::string>(node["model"], "driver.model"));
    } catch (const InvalidArgument& e) {
        r.fail(node["model"], "driver.model", e.what());
    }
    if (node["seed"]) d.seed = r.scalar<std::uint64_t>(node["seed"], "driver.seed");

    const std::size_t m = 2 * s.N - 2;
    auto forbid = [&](const char* key) {
        if (node[key]) r.fail(node[key], std::string("driver.") + key, "not allowed for model " + std::string(to_string(d.model)));
    };
    auto require = [&](const char* key) {
        if (!node[key]) r.fail(node, std::string("driver.") + key, "missing required key for model " + std::string(to_string(d.model)));
        return node[key];
    };

    if (d.model == DriverModel::constant) {
        forbid("lower_bounds");
        forbid("upper_bounds");
        d.lower_bounds = r.per_coefficient(require("values"), "driver.values", m);
        d.upper_bounds = d.lower_bounds;
    } else {
        forbid("values");
        d.lower_bounds = r.per_coefficient(require("lower_bounds"), "driver.lower_bounds", m);
        d.upper_bounds = r.per_coefficient(require("upper_bounds"), "driver.upper_bounds", m);
    }
    const char* lower_key = d.model == DriverModel::constant ? "values" : "lower_bounds";
    for (std::size_t i = 0; i < m; ++i) {
        if (!(d.lower_bounds[i] > 0.0)) {
            r.fail(node[lower_key], std::string("driver.") + lower_key + "[" + std::to_string(i) + "]",
                   "violates 0<c_* (coefficient " + std::to_string(i) + " = " + std::to_string(d.lower_bounds[i]) + ")");
        }
        if (d.lower_bounds[i] > d.upper_bounds[i]) {
            r.fail(node["upper_bounds"], "driver.upper_bounds[" + std::to_string(i) + "]",
                   "violates c_*<=C_* (coefficient " + std::to_string(i) + ")");
        }
    }

    if (d.model == DriverModel::periodic) {
        d.period = r.real(require("period"), "driver.period");
        check_positive(r, node["period"], "driver.period", d.period);
        if (node["phases"]) d.phases = r.per_coefficient(node["phases"], "driver.phases", m);
    } else {
        forbid("period");
        forbid("phases");
    }
    if (d.model == DriverModel::telegraph) {
        d.mean_holding_time = r.real(require("mean_holding_time"), "driver.mean_holding_time");
        check_positive(r, node["mean_holding_time"], "driver.mean_holding_time", d.mean_holding_time);
    } else {
        forbid("mean_holding_time");
    }
}

void parse_integrator(const Reader& r, const YAML::Node& node, Scenario& s) {
    r.expect_map(node, "integrator", {"step", "sample_every", "t0", "t1", "initial"});
    IntegratorSpec& in = s.integrator;
    if (node["step"]) in.step = r.real(node["step"], "integrator.step");
    check_positive(r, node["step"], "integrator.step", in.step);
    if (node["sample_every"]) in.sample_every = r.real(node["sample_every"], "integrator.sample_every");
    check_positive(r, node["sample_every"], "integrator.sample_every", in.sample_every);
    if (node["t0"]) in.t0 = r.real(node["t0"], "integrator.t0");
    if (node["t1"]) in.t1 = r.real(node["t1"], "integrator.t1");
    if (!(in.t1 > in.t0)) r.fail(node["t1"] ? node["t1"] : node, "integrator.t1", "must exceed integrator.t0");
    if (node["initial"]) {
        in.initial = r.reals(node["initial"], "integrator.initial");
        if (in.initial.size() != s.N) r.fail(node["initial"], "integrator.initial", "expected N values");
        try {
            ProbabilityVector check(in.initial);
        } catch (const InvalidArgument& e) {
            r.fail(node["initial"], "integrator.initial", e.what());
        }
    }
}

void parse_attractor(const Reader& r, const YAML::Node& node, Scenario& s) {
    r.expect_map(node, "attractor", {"T", "tol", "times", "T_c", "n_pairs", "deltas"});
    AttractorSpec& a = s.attractor;
    if (node["T"]) a.T = r.real(node["T"], "attractor.T");
    check_positive(r, node["T"], "attractor.T", a.T);
    if (node["tol"]) a.tol = r.real(node["tol"], "attractor.tol");
    check_positive(r, node["tol"], "attractor.tol", a.tol);
    if (node["times"]) {
        a.times = r.reals(node["times"], "attractor.times");
        if (a.times.empty()) r.fail(node["times"], "attractor.times", "must be non-empty");
        for (std::size_t i = 1; i < a.times.size(); ++i) {
            if (!(a.times[i] > a.times[i - 1])) r.fail(node["times"], "attractor.times", "must be strictly increasing");
        }
    }
    if (node["T_c"]) {
        a.T_c = r.reals(node["T_c"], "attractor.T_c");
        for (double t : a.T_c) {
            if (t < 0.0) r.fail(node["T_c"], "attractor.T_c", "entries must be >= 0");
        }
    }
    if (node["n_pairs"]) {
        const auto n = r.scalar<long long>(node["n_pairs"], "attractor.n_pairs");
        if (n < 1) r.fail(node["n_pairs"], "attractor.n_pairs", "must be at least 1");
        a.n_pairs = static_cast<std::size_t>(n);
    }
    if (node["deltas"]) a.deltas = r.reals(node["deltas"], "attractor.deltas");
    const double max_delta = 1.0 / (2.0 * *std::max_element(s.driver.upper_bounds.begin(), s.driver.upper_bounds.end()));
    for (double delta : a.deltas) {
        if (!(delta > 0.0) || delta > max_delta) {
            r.fail(node["deltas"] ? node["deltas"] : node, "attractor.deltas",
                   "Euler step " + std::to_string(delta) + " not in (0, " + std::to_string(max_delta) + "]");
        }
    }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
    const Reader r(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source, e.mark.line + 1, "<document>", e.msg);
    }
    if (!root.IsMap()) throw ConfigError(source, 1, "<document>", "expected a mapping at top level");
    r.expect_map(root, "", {"name", "N", "driver", "integrator", "attractor", "verify", "output"});

    Scenario s;
    if (!root["name"]) r.fail(root, "name", "missing required key");
    s.name = r.scalar<std::string>(root["name"], "name");
    if (s.name.empty()) r.fail(root["name"], "name", "must be non-empty");
    if (!root["N"]) r.fail(root, "N", "missing required key");
    const auto n = r.scalar<long long>(root["N"], "N");
    if (n < 2) r.fail(root["N"], "N", "must be at least 2");
    s.N = static_cast<std::size_t>(n);

    if (!root["driver"]) r.fail(root, "driver", "missing required key");
    parse_driver(r, root["driver"], s);
    if (root["integrator"]) parse_integrator(r, root["integrator"], s);
    if (root["attractor"]) parse_attractor(r, root["attractor"], s);
    else parse_attractor(r, YAML::Node(YAML::NodeType::Map), s);

    if (const auto v = root["verify"]) {
        r.expect_map(v, "verify", {"seeds", "path_horizon"});
        if (v["seeds"]) {
            const auto seeds = r.scalar<long long>(v["seeds"], "verify.seeds");
            if (seeds < 1) r.fail(v["seeds"], "verify.seeds", "must be at least 1");
            s.verify.seeds = static_cast<std::size_t>(seeds);
        }
        if (v["path_horizon"]) {
            s.verify.path_horizon = r.real(v["path_horizon"], "verify.path_horizon");
            check_positive(r, v["path_horizon"], "verify.path_horizon", s.verify.path_horizon);
        }
    }
    if (const auto o = root["output"]) {
        r.expect_map(o, "output", {"directory", "formats"});
        if (o["directory"]) s.output.directory = r.scalar<std::string>(o["directory"], "output.directory");
        if (o["formats"]) {
            if (!o["formats"].IsSequence()) r.fail(o["formats"], "output.formats", "expected a list");
            s.output.formats.clear();
            for (const auto& f : o["formats"]) {
                const auto name = r.scalar<std::string>(f, "output.formats");
                if (name != "csv" && name != "json") r.fail(f, "output.formats", "unknown format '" + name + "'");
                s.output.formats.push_back(name);
            }
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "<file>", "cannot open scenario file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::string to_yaml(const Scenario& s) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    auto seq = [&](const std::vector<double>& v) {
        e << YAML::Flow << YAML::BeginSeq;
        for (double x : v) e << x;
        e << YAML::EndSeq;
    };
    e << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << s.name;
    e << YAML::Key << "N" << YAML::Value << s.N;

    e << YAML::Key << "driver" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "model" << YAML::Value << std::string(to_string(s.driver.model));
    e << YAML::Key << "seed" << YAML::Value << s.driver.seed;
    if (s.driver.model == DriverModel::constant) {
        e << YAML::Key << "values" << YAML::Value;
        seq(s.driver.lower_bounds);
    } else {
        e << YAML::Key << "lower_bounds" << YAML::Value;
        seq(s.driver.lower_bounds);
        e << YAML::Key << "upper_bounds" << YAML::Value;
        seq(s.driver.upper_bounds);
    }
    if (s.driver.model == DriverModel::periodic) {
        e << YAML::Key << "period" << YAML::Value << s.driver.period;
        if (!s.driver.phases.empty()) {
            e << YAML::Key << "phases" << YAML::Value;
            seq(s.driver.phases);
        }
    }
    if (s.driver.model == DriverModel::telegraph) {
        e << YAML::Key << "mean_holding_time" << YAML::Value << s.driver.mean_holding_time;
    }
    e << YAML::EndMap;

    e << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "step" << YAML::Value << s.integrator.step;
    e << YAML::Key << "sample_every" << YAML::Value << s.integrator.sample_every;
    e << YAML::Key << "t0" << YAML::Value << s.integrator.t0;
    e << YAML::Key << "t1" << YAML::Value << s.integrator.t1;
    if (!s.integrator.initial.empty()) {
        e << YAML::Key << "initial" << YAML::Value;
        seq(s.integrator.initial);
    }
    e << YAML::EndMap;

    e << YAML::Key << "attractor" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "T" << YAML::Value << s.attractor.T;
    e << YAML::Key << "tol" << YAML::Value << s.attractor.tol;
    e << YAML::Key << "times" << YAML::Value;
    seq(s.attractor.times);
    e << YAML::Key << "T_c" << YAML::Value;
    seq(s.attractor.T_c);
    e << YAML::Key << "n_pairs" << YAML::Value << s.attractor.n_pairs;
    e << YAML::Key << "deltas" << YAML::Value;
    seq(s.attractor.deltas);
    e << YAML::EndMap;

    e << YAML::Key << "verify" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "seeds" << YAML::Value << s.verify.seeds;
    e << YAML::Key << "path_horizon" << YAML::Value << s.verify.path_horizon;
    e << YAML::EndMap;

    e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "directory" << YAML::Value << s.output.directory;
    e << YAML::Key << "formats" << YAML::Value << YAML::Flow << s.output.formats;
    e << YAML::EndMap;

    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

std::string scenario_hash(const Scenario& s) {
    // where artifacts go does not change what they contain
    Scenario content = s;
    content.output = OutputSpec{};
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : to_yaml(content)) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

DrivingSystem make_driver(const Scenario& s) { return make_driver(s, s.driver.seed); }

DrivingSystem make_driver(const Scenario& s, std::uint64_t seed) {
    const DriverSpec& d = s.driver;
    switch (d.model) {
        case DriverModel::constant: return DrivingSystem::constant(d.lower_bounds);
        case DriverModel::periodic:
            return d.phases.empty() ? DrivingSystem::periodic(d.lower_bounds, d.upper_bounds, d.period, seed)
                                    : DrivingSystem::periodic(d.lower_bounds, d.upper_bounds, d.period, d.phases);
        case DriverModel::telegraph:
            return DrivingSystem::telegraph(d.lower_bounds, d.upper_bounds, d.mean_holding_time, seed);
    }
    throw InvalidArgument("unknown driver model");
}

SuiteSettings suite_settings(const Scenario& s) {
    SuiteSettings st;
    st.step = s.integrator.step;
    st.horizon = s.integrator.t1 - s.integrator.t0;
    st.pullback_horizon = s.attractor.T;
    st.path_horizon = s.verify.path_horizon;
    st.tolerance = s.attractor.tol;
    st.decay_horizons = {s.attractor.T / 8, s.attractor.T / 4, s.attractor.T / 2, s.attractor.T};
    st.path_times.clear();
    for (int k = 0; k <= 8; ++k) st.path_times.push_back(s.attractor.T * k / 8.0);
    if (!s.attractor.T_c.empty()) st.contraction_times = s.attractor.T_c;
    st.n_pairs = s.attractor.n_pairs;
    return st;
}

}  // namespace rmc
