#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rmc/driving.hpp"
#include "rmc/generator.hpp"

namespace rmc {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDefaultSampleEvery = 0.1;

/// m state vectors of length n, stored column by column.
class StateBlock {
public:
    StateBlock() = default;
    StateBlock(std::size_t n, std::size_t m) : n_(n), m_(m), data_(n * m, 0.0) {}

    static StateBlock identity(std::size_t n);
    static StateBlock from_column(std::span<const double> v);

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }
    std::span<double> column(std::size_t j) noexcept { return {data_.data() + j * n_, n_}; }
    std::span<const double> column(std::size_t j) const noexcept { return {data_.data() + j * n_, n_}; }
    std::vector<double> column_vector(std::size_t j) const;
    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    bool all_finite() const noexcept;

    bool operator==(const StateBlock&) const = default;

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> data_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    /// max over samples of |sum_i p_i(t) - sum_i p_i(t0)|
    double mass_drift = 0.0;
};

/**
 * Classical RK4 for dp/dt = Q(theta_t omega) p from t0 to each time in `times`
 * (non-decreasing, all >= t0), returning the block at each. Steps never cross a
 * coefficient jump: every jump inside the window is a forced step boundary, and
 * on piecewise-constant drivers each piece uses its own frozen generator. Each
 * sub-interval gets ceil(length / step) equal steps. No renormalization or
 * clipping is applied.
 *
 * Throws IntegrationError if the state becomes non-finite.
 */
std::vector<StateBlock> propagate_at(const DrivingSystem& d, StateBlock y0, double t0,
                                     std::span<const double> times, double step = kDefaultStep);

/// Final block of propagate_at over [t0, t1].
StateBlock propagate(const DrivingSystem& d, StateBlock y0, double t0, double t1,
                     double step = kDefaultStep);

/// Fundamental matrix over [t0, t1]: column j is the image of the j-th unit vector.
StateBlock propagator(const DrivingSystem& d, double t0, double t1, double step = kDefaultStep);

/// Sampled solution from p0 on [t0, t1]; samples at t0 + k * sample_every and at t1.
Trajectory integrate_rde(const DrivingSystem& d, std::span<const double> p0, double t0, double t1,
                         double step = kDefaultStep, double sample_every = kDefaultSampleEvery);

/// phi(t, omega, p0): state at time t started from p0 at time 0. phi(0, ., p0) == p0 exactly.
std::vector<double> cocycle(const DrivingSystem& d, double t, std::span<const double> p0,
                            double step = kDefaultStep);

/// q(t; q0) for dq/dt = Qbar q.
std::vector<double> integrate_comparison(const ComparisonMatrix& qbar, std::span<const double> q0,
                                         double t, double step = kDefaultStep);

/// Sampled comparison solution on [0, t1], same sampling rule as integrate_rde.
Trajectory comparison_trajectory(const ComparisonMatrix& qbar, std::span<const double> q0, double t1,
                                 double step = kDefaultStep,
                                 double sample_every = kDefaultSampleEvery);

/// I + Q delta; requires 0 < delta <= 1 / max_k |diag_k| (throws InadmissibleStep).
DenseMatrix transition_matrix_euler(const TridiagonalGenerator& q, double delta);

/// Largest Euler step admissible for every generator the driver can produce: 1 / (2 max upper bound).
double max_euler_step(const DrivingSystem& d) noexcept;

/// Discrete chain p_{n+1} = (I + Q(t_n) delta) p_n, t_n = t0 + n delta. Records all n_steps + 1 states.
Trajectory euler_cocycle(const DrivingSystem& d, std::span<const double> p0, double t0, long n_steps,
                         double delta);

/// Block form of euler_cocycle returning only the final block.
StateBlock euler_propagate(const DrivingSystem& d, StateBlock y0, double t0, long n_steps,
                           double delta);

}  // namespace rmc
