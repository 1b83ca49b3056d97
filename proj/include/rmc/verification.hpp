#pragma once

// Ensemble-level invariant checks. Each check runs over a list of driver
// realizations (typically one per seed), in parallel across realizations,
// and reports the worst measured value against its threshold.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rmc/driving.hpp"
#include "rmc/ensemble.hpp"

namespace rmc {

struct CheckResult {
    std::string name;
    bool passed = false;
    /// worst measured quantity (meaning depends on the check)
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct SuiteSettings {
    double step = 1e-3;

    // mass conservation and interior margin
    double horizon = 50.0;
    double sample_every = 0.01;
    double margin_from = 0.1;
    double mass_tolerance = 1e-9;

    // comparison with the deterministic lower bound
    double comparison_horizon = 20.0;
    double comparison_grid = 0.1;
    double comparison_tolerance = 1e-9;

    // cocycle property
    std::vector<double> cocycle_times{0.5, 1.0, 2.0};
    std::size_t cocycle_points = 10;
    double cocycle_tolerance = 1e-8;

    // contraction
    std::vector<double> contraction_times{0.5, 1.0, 2.0, 4.0};
    std::size_t n_pairs = 200;

    // pullback singleton
    double pullback_horizon = 40.0;
    double tolerance = 1e-8;
    std::vector<double> decay_horizons{5.0, 10.0, 20.0, 40.0};
    double min_r_squared = 0.95;

    // invariance and forward attraction
    double path_horizon = 40.0;
    std::vector<double> path_times{0, 5, 10, 15, 20, 25, 30, 35, 40};
    std::size_t forward_starts = 5;
    double invariance_tolerance = 1e-6;
    double forward_tolerance = 1e-6;

    // periodic drivers only
    std::size_t periodicity_grid = 8;
    double periodicity_tolerance = 1e-7;
};

/// |sum_i p_i(t) - 1| over [0, horizon] from every vertex.
CheckResult check_mass_conservation(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                                    Execution exec = Execution::parallel);

/// min_i p_i(t) > 0 on [margin_from, horizon] from every vertex; value is the empirical margin.
CheckResult check_interior_margin(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                                  Execution exec = Execution::parallel);

/// p(t; omega, p0) - q(t; p0) >= -tolerance, Qbar from each driver's declared bounds.
CheckResult check_comparison(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                             Execution exec = Execution::parallel);

/// |phi(t+s, w, x) - phi(s, theta_t w, phi(t, w, x))|_inf over the time grid squared.
CheckResult check_cocycle(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                          Execution exec = Execution::parallel);

/// lambda(1) < 1 and lambda(T_c) non-increasing over contraction_times.
CheckResult check_contraction(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                              Execution exec = Execution::parallel);

/// Vertex-image diameter below tolerance at the pullback horizon, log-linear decay with good fit.
CheckResult check_pullback(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                           Execution exec = Execution::parallel);

CheckResult check_invariance(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                             Execution exec = Execution::parallel);

/// Forward error from random interior starts falls below forward_tolerance by the last path time.
CheckResult check_forward_attraction(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                                     Execution exec = Execution::parallel);

/// a(theta_{t+P} w) = a(theta_t w) on a grid of one period; periodic drivers only.
CheckResult check_periodicity(std::span<const DrivingSystem> drivers, const SuiteSettings& s,
                              Execution exec = Execution::parallel);

/// Every check applicable to the drivers' model, in a fixed order.
std::vector<CheckResult> run_invariant_suite(std::span<const DrivingSystem> drivers,
                                             const SuiteSettings& s,
                                             Execution exec = Execution::parallel);

/// Random interior point k for a given seed (Dirichlet(1)).
std::vector<double> interior_sample(std::size_t n, std::uint64_t seed, std::size_t k);

}  // namespace rmc
