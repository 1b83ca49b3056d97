#include "rmc/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "rmc/attractor.hpp"
#include "rmc/error.hpp"
#include "rmc/generator.hpp"
#include "rmc/integrator.hpp"
#include "rmc/philox.hpp"
#include "rmc/projective.hpp"

namespace rmc {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::vector<double> grid(double t0, double t1, double spacing) {
    std::vector<double> out;
    for (long k = 0;; ++k) {
        const double t = t0 + static_cast<double>(k) * spacing;
        if (t > t1 + 1e-12 * std::max(1.0, std::abs(t1))) break;
        out.push_back(t);
    }
    return out;
}

void require_drivers(std::span<const DrivingSystem> drivers) {
    if (drivers.empty()) throw InvalidArgument("verification needs at least one driver");
}

// worst value over realizations, larger is worse
struct Worst {
    double value = 0.0;
    std::size_t index = 0;
};

template <class V>
Worst worst_of(const std::vector<V>& values) {
    Worst w;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i == 0 || values[i] > w.value) w = {static_cast<double>(values[i]), i};
    }
    return w;
}

std::vector<StateBlock> vertex_samples(const DrivingSystem& d, const std::vector<double>& times, double step) {
    return propagate_at(d, StateBlock::identity(d.states()), 0.0, times, step);
}

struct PathErrors {
    bool converged = false;
    double diameter = 0.0;
    double invariance = 0.0;
    double forward_final = 0.0;
    double forward_initial = 0.0;
};

PathErrors path_errors(const DrivingSystem& d, const SuiteSettings& s) {
    PathErrors e;
    const AttractorPath path =
        attractor_path(d, s.path_times, s.path_horizon, s.tolerance, s.step, Execution::serial);
    e.converged = path.converged;
    e.diameter = path.final_diameter;
    if (!path.converged) return e;
    e.invariance = verify_invariance(d, path, s.step, Execution::serial);
    for (std::size_t k = 0; k < s.forward_starts; ++k) {
        const ProbabilityVector p0(interior_sample(d.states(), d.seed() + 0x9e37u, k));
        const auto err = forward_error(d, p0, path, s.step);
        e.forward_final = std::max(e.forward_final, err.back());
        e.forward_initial = std::max(e.forward_initial, err.front());
    }
    return e;
}

CheckResult invariance_result(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                              const std::vector<PathErrors>& errs) {
    CheckResult r{"invariance", true, 0.0, s.invariance_tolerance, ""};
    std::size_t unconverged = 0;
    for (const auto& e : errs) {
        if (!e.converged) {
            ++unconverged;
            r.passed = false;
            continue;
        }
        r.value = std::max(r.value, e.invariance);
    }
    r.passed = r.passed && r.value < s.invariance_tolerance;
    r.detail = "max |phi(s, theta_t w, a(theta_t w)) - a(theta_{t+s} w)| = " + num(r.value) + " over " +
               std::to_string(drivers.size()) + " realizations, horizon " + num(s.path_horizon);
    if (unconverged > 0) r.detail += "; " + std::to_string(unconverged) + " paths not converged at tol " + num(s.tolerance);
    return r;
}

CheckResult forward_result(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                           const std::vector<PathErrors>& errs) {
    CheckResult r{"forward-attraction", true, 0.0, s.forward_tolerance, ""};
    std::size_t unconverged = 0;
    for (const auto& e : errs) {
        if (!e.converged) {
            ++unconverged;
            r.passed = false;
            continue;
        }
        r.value = std::max(r.value, e.forward_final);
        r.passed = r.passed && e.forward_final < e.forward_initial;
    }
    r.passed = r.passed && r.value < s.forward_tolerance;
    r.detail = "max forward error at t = " + num(s.path_times.back()) + ": " + num(r.value) + " (" +
               std::to_string(s.forward_starts) + " interior starts x " + std::to_string(drivers.size()) +
               " realizations)";
    if (unconverged > 0) r.detail += "; " + std::to_string(unconverged) + " paths not converged";
    return r;
}

}  // namespace

std::vector<double> interior_sample(std::size_t n, std::uint64_t seed, std::size_t k) {
    const Philox4x32 rng(seed);
    std::vector<double> v(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = rng.exponential(static_cast<std::uint32_t>(k), 0x51u, i);
        total += v[i];
    }
    for (double& x : v) x /= total;
    return v;
}

CheckResult check_mass_conservation(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                                    Execution exec) {
    require_drivers(drivers);
    const auto times = grid(0.0, s.horizon, s.sample_every);
    const auto drift = map_indexed(
        drivers.size(),
        [&](std::size_t i) {
            double worst = 0.0;
            for (const auto& b : vertex_samples(drivers[i], times, s.step)) {
                for (std::size_t j = 0; j < b.m(); ++j) {
                    const auto c = b.column(j);
                    worst = std::max(worst, std::abs(std::accumulate(c.begin(), c.end(), 0.0) - 1.0));
                }
            }
            return worst;
        },
        exec);
    const Worst w = worst_of(drift);
    return {"mass-conservation", w.value <= s.mass_tolerance, w.value, s.mass_tolerance,
            "max |sum p(t) - 1| on [0, " + num(s.horizon) + "] from all vertices, " +
                std::to_string(drivers.size()) + " realizations"};
}

CheckResult check_interior_margin(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                                  Execution exec) {
    require_drivers(drivers);
    const auto times = grid(0.0, s.horizon, s.sample_every);
    const auto margins = map_indexed(
        drivers.size(),
        [&](std::size_t i) {
            double margin = kInfinity;
            const auto blocks = vertex_samples(drivers[i], times, s.step);
            for (std::size_t k = 0; k < times.size(); ++k) {
                if (times[k] < s.margin_from - 1e-12) continue;
                for (std::size_t j = 0; j < blocks[k].m(); ++j) {
                    margin = std::min(margin, boundary_margin(blocks[k].column(j)));
                }
            }
            return margin;
        },
        exec);
    const double beta = *std::min_element(margins.begin(), margins.end());
    return {"positivity", beta > 0.0, beta, 0.0,
            "empirical margin beta(" + num(s.margin_from) + ", " + num(s.horizon) + ") = " + num(beta) +
                " (min_i p_i from every vertex)"};
}

CheckResult check_comparison(std::span<const DrivingSystem> drivers, const SuiteSettings& s, Execution exec) {
    require_drivers(drivers);
    const auto violation = map_indexed(
        drivers.size(),
        [&](std::size_t i) {
            const DrivingSystem& d = drivers[i];
            const std::size_t n = d.states();
            const ComparisonMatrix qbar = comparison_matrix(d.lower_bounds(), d.upper_bounds());
            double worst = 0.0;  // largest q - p
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<double> q0(n, 0.0);
                q0[j] = 1.0;
                const Trajectory q = comparison_trajectory(qbar, q0, s.comparison_horizon, s.step, s.comparison_grid);
                const auto p = propagate_at(d, StateBlock::from_column(q0), 0.0, q.times, s.step);
                for (std::size_t k = 0; k < q.times.size(); ++k) {
                    const auto pc = p[k].column(0);
                    for (std::size_t c = 0; c < n; ++c) worst = std::max(worst, q.states[k][c] - pc[c]);
                }
            }
            return worst;
        },
        exec);
    const Worst w = worst_of(violation);
    return {"comparison", w.value <= s.comparison_tolerance, -w.value, -s.comparison_tolerance,
            "min_{t,i} (p - q)_i = " + num(-w.value) + " on a " + num(s.comparison_grid) + "-grid of [0, " +
                num(s.comparison_horizon) + "], all vertices"};
}

CheckResult check_cocycle(std::span<const DrivingSystem> drivers, const SuiteSettings& s, Execution exec) {
    require_drivers(drivers);
    const auto errors = map_indexed(
        drivers.size(),
        [&](std::size_t i) {
            const DrivingSystem& d = drivers[i];
            const std::size_t n = d.states();
            StateBlock x(n, s.cocycle_points);
            for (std::size_t k = 0; k < s.cocycle_points; ++k) {
                const auto v = interior_sample(n, d.seed(), k);
                std::copy(v.begin(), v.end(), x.column(k).begin());
            }
            double worst = 0.0;
            for (double t : s.cocycle_times) {
                const StateBlock mid = propagate(d, x, 0.0, t, s.step);
                for (double u : s.cocycle_times) {
                    const StateBlock direct = propagate(d, x, 0.0, t + u, s.step);
                    const StateBlock composed = propagate(shift(d, t), mid, 0.0, u, s.step);
                    worst = std::max(worst, max_norm_distance(direct.data(), composed.data()));
                }
            }
            return worst;
        },
        exec);
    const Worst w = worst_of(errors);
    return {"cocycle", w.value <= s.cocycle_tolerance, w.value, s.cocycle_tolerance,
            "max |phi(t+s) - phi(s, theta_t) o phi(t)|_inf over " + std::to_string(s.cocycle_points) +
                " interior points per realization"};
}

CheckResult check_contraction(std::span<const DrivingSystem> drivers, const SuiteSettings& s, Execution exec) {
    require_drivers(drivers);
    if (s.contraction_times.empty()) throw InvalidArgument("contraction_times must be non-empty");
    struct Outcome {
        double lambda_one = 0.0;
        bool monotone = true;
    };
    const auto outcomes = map_indexed(
        drivers.size(),
        [&](std::size_t i) {
            Outcome o;
            double prev = kInfinity;
            for (double tc : s.contraction_times) {
                const double lambda =
                    estimate_contraction(drivers[i], tc, s.n_pairs, drivers[i].seed(), s.step, Execution::serial)
                        .lambda_estimate;
                if (tc == 1.0) o.lambda_one = lambda;
                // same pairs at every T_c; allow rounding in the ratio only
                if (lambda > prev * (1.0 + 1e-9)) o.monotone = false;
                prev = lambda;
            }
            return o;
        },
        exec);
    double worst = 0.0;
    bool monotone = true;
    for (const auto& o : outcomes) {
        worst = std::max(worst, o.lambda_one);
        monotone = monotone && o.monotone;
    }
    return {"contraction", worst < 1.0 && monotone, worst, 1.0,
            "max lambda(T_c = 1) = " + num(worst) + " over " + std::to_string(s.n_pairs) +
                " pairs per realization; non-increasing in T_c: " + (monotone ? "yes" : "no")};
}

CheckResult check_pullback(std::span<const DrivingSystem> drivers, const SuiteSettings& s, Execution exec) {
    require_drivers(drivers);
    struct Outcome {
        double diameter = 0.0;
        DecayFit fit;
    };
    const auto outcomes = map_indexed(
        drivers.size(),
        [&](std::size_t i) {
            Outcome o;
            std::vector<std::pair<double, double>> series;
            for (double T : s.decay_horizons) {
                series.emplace_back(T, pullback_point(drivers[i], T, s.tolerance, s.step).diameter);
            }
            const auto at = std::find_if(series.begin(), series.end(),
                                         [&](const auto& p) { return p.first == s.pullback_horizon; });
            o.diameter = at != series.end()
                             ? at->second
                             : pullback_point(drivers[i], s.pullback_horizon, s.tolerance, s.step).diameter;
            o.fit = decay_rate(series);
            return o;
        },
        exec);
    double worst = 0.0, worst_rate = -kInfinity, worst_r2 = 1.0;
    std::size_t failing = 0;
    for (const auto& o : outcomes) {
        worst = std::max(worst, o.diameter);
        worst_rate = std::max(worst_rate, o.fit.rate);
        worst_r2 = std::min(worst_r2, o.fit.r_squared);
        if (!(o.diameter < s.tolerance)) ++failing;
    }
    const bool ok = failing == 0 && worst_rate < 0.0 && worst_r2 > s.min_r_squared;
    return {"pullback", ok, worst, s.tolerance,
            "max Hilbert diameter at T = " + num(s.pullback_horizon) + ": " + num(worst) + " (" +
                std::to_string(failing) + "/" + std::to_string(drivers.size()) +
                " above tol); slowest decay rate " + num(worst_rate) + ", min R^2 " + num(worst_r2)};
}

CheckResult check_invariance(std::span<const DrivingSystem> drivers, const SuiteSettings& s, Execution exec) {
    require_drivers(drivers);
    const auto errs = map_indexed(drivers.size(), [&](std::size_t i) { return path_errors(drivers[i], s); }, exec);
    return invariance_result(drivers, s, errs);
}

CheckResult check_forward_attraction(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                                     Execution exec) {
    require_drivers(drivers);
    const auto errs = map_indexed(drivers.size(), [&](std::size_t i) { return path_errors(drivers[i], s); }, exec);
    return forward_result(drivers, s, errs);
}

CheckResult check_periodicity(std::span<const DrivingSystem> drivers, const SuiteSettings& s, Execution exec) {
    require_drivers(drivers);
    for (const auto& d : drivers) {
        if (d.model() != DriverModel::periodic) throw InvalidArgument("periodicity check needs periodic drivers");
    }
    const auto gaps = map_indexed(
        drivers.size(),
        [&](std::size_t i) {
            const DrivingSystem& d = drivers[i];
            std::vector<double> times, shifted;
            for (std::size_t k = 0; k < s.periodicity_grid; ++k) {
                const double t = d.period() * static_cast<double>(k) / static_cast<double>(s.periodicity_grid);
                times.push_back(t);
                shifted.push_back(t + d.period());
            }
            const auto a = attractor_path(d, times, s.path_horizon, s.tolerance, s.step, Execution::serial);
            const auto b = attractor_path(d, shifted, s.path_horizon, s.tolerance, s.step, Execution::serial);
            double worst = 0.0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                worst = std::max(worst, max_norm_distance(a.points[k].values(), b.points[k].values()));
            }
            return worst;
        },
        exec);
    const Worst w = worst_of(gaps);
    return {"periodicity", w.value < s.periodicity_tolerance, w.value, s.periodicity_tolerance,
            "max |a(theta_{t+P} w) - a(theta_t w)|_inf on a " + std::to_string(s.periodicity_grid) +
                "-point grid of one period"};
}

std::vector<CheckResult> run_invariant_suite(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                                             Execution exec) {
    require_drivers(drivers);
    std::vector<CheckResult> out;
    out.push_back(check_mass_conservation(drivers, s, exec));
    out.push_back(check_interior_margin(drivers, s, exec));
    out.push_back(check_comparison(drivers, s, exec));
    out.push_back(check_cocycle(drivers, s, exec));
    out.push_back(check_contraction(drivers, s, exec));
    out.push_back(check_pullback(drivers, s, exec));
    const auto errs = map_indexed(drivers.size(), [&](std::size_t i) { return path_errors(drivers[i], s); }, exec);
    out.push_back(invariance_result(drivers, s, errs));
    out.push_back(forward_result(drivers, s, errs));
    if (drivers.front().model() == DriverModel::periodic) out.push_back(check_periodicity(drivers, s, exec));
    return out;
}

}  // namespace rmc
