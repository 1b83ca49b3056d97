#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rmc/driving.hpp"
#include "rmc/ensemble.hpp"
#include "rmc/generator.hpp"
#include "rmc/integrator.hpp"

namespace rmc {

inline constexpr double kDefaultHorizon = 40.0;
inline constexpr double kDefaultTolerance = 1e-8;
/// Attractor points are images of the barycenter; their mass may drift by the integrator's rounding.
inline constexpr double kAttractorMassTolerance = 1e-9;

struct PullbackResult {
    /// Image of the barycenter, the representative of a(omega).
    ProbabilityVector point = ProbabilityVector::barycenter(2);
    /// Hilbert diameter of the N vertex images (infinite at T = 0).
    double diameter = 0.0;
    double max_norm_diameter = 0.0;
    bool converged = false;
    /// Vertex images, one per state.
    std::vector<std::vector<double>> images;
};

/**
 * Evolves the N simplex vertices from time -T to 0, i.e. under
 * cocycle(shift(d, -T), T, .). By linearity the image of the simplex is the
 * convex hull of these images, so their Hilbert diameter bounds the distance
 * of any representative from the attractor point.
 */
PullbackResult pullback_point(const DrivingSystem& d, double T, double tol = kDefaultTolerance,
                              double step = kDefaultStep);

struct AttractorPath {
    std::vector<double> times;
    /// a(theta_t omega) for each time
    std::vector<ProbabilityVector> points;
    /// Hilbert diameter of the vertex images at each time
    std::vector<double> diameters;
    double pullback_horizon = 0.0;
    double tolerance = 0.0;
    /// max over sampled times
    double final_diameter = 0.0;
    bool converged = false;
};

AttractorPath attractor_path(const DrivingSystem& d, std::span<const double> times, double T,
                             double tol = kDefaultTolerance, double step = kDefaultStep,
                             Execution exec = Execution::parallel);

/// max_j |cocycle(shift(d, t_j), t_{j+1} - t_j, a_j) - a_{j+1}|_inf over consecutive samples.
double verify_invariance(const DrivingSystem& d, const AttractorPath& path, double step = kDefaultStep,
                         Execution exec = Execution::parallel);

/// |phi(t, omega, p0) - a(theta_t omega)|_inf at each path time (times must be >= 0).
std::vector<double> forward_error(const DrivingSystem& d, const ProbabilityVector& p0,
                                  const AttractorPath& path, double step = kDefaultStep);

struct ContractionReport {
    double T_c = 0.0;
    double lambda_estimate = 0.0;
    std::size_t n_pairs = 0;
    /// pairs whose initial distance exceeded the skip threshold
    std::size_t n_used = 0;
    std::pair<std::vector<double>, std::vector<double>> max_ratio_pair;
};

/// Pairs closer than this (Hilbert metric) are skipped when estimating contraction.
inline constexpr double kMinPairDistance = 1e-12;
/// Margin of the near-boundary sample points.
inline constexpr double kBoundarySampleMargin = 1e-3;

/// The k-th pair of sample points used by estimate_contraction.
std::pair<std::vector<double>, std::vector<double>> contraction_sample_pair(std::size_t n,
                                                                          std::uint64_t seed,
                                                                          std::size_t k);

/**
 * max over sampled pairs of rho_H(phi(T_c, omega, x), phi(T_c, omega, y)) / rho_H(x, y).
 * Pair k is drawn deterministically from (seed, k), so estimates at different
 * T_c with the same seed use the same pairs.
 */
ContractionReport estimate_contraction(const DrivingSystem& d, double T_c, std::size_t n_pairs,
                                       std::uint64_t seed, double step = kDefaultStep,
                                       Execution exec = Execution::parallel);

struct DecayFit {
    /// slope of ln(diameter) against T, per unit time
    double rate = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t points_used = 0;
};

/// Least-squares fit of ln(diameter) vs T over the finite positive entries (at least 3).
DecayFit decay_rate(std::span<const std::pair<double, double>> diameters);

struct EulerComparison {
    double delta = 0.0;
    double distance = 0.0;
    std::vector<double> discrete_point;
};

/// For each delta, the Euler-chain pullback point over horizon T and its
/// max-norm distance to the continuous pullback point.
std::vector<EulerComparison> euler_attractor_comparison(const DrivingSystem& d,
                                                        std::span<const double> deltas, double T,
                                                        double tol = kDefaultTolerance,
                                                        double step = kDefaultStep);

}  // namespace rmc
