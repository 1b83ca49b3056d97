#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace rmc {

enum class DriverModel { constant, periodic, telegraph };

std::string_view to_string(DriverModel model);
/// Parses "constant", "periodic" or "telegraph"; throws InvalidArgument otherwise.
DriverModel parse_driver_model(std::string_view name);

/**
 * Seeded two-sided coefficient path t -> (q_1, ..., q_{2N-2}) with time-shift
 * semantics. Values are immutable after construction; every query is a pure
 * function of (model, seed, parameters, time_offset).
 *
 *  - constant:  q_i(t) = lower_i = upper_i.
 *  - periodic:  q_i(t) = mid_i + amp_i * sin(2 pi t / P + phase_i), with
 *               mid/amp chosen so the range is exactly [lower_i, upper_i].
 *  - telegraph: one renewal stream per coefficient; holding times are
 *               exponential with mean h and each holding interval carries a
 *               value drawn uniformly from [lower_i, upper_i]. Renewal points
 *               are generated forward and backward from absolute time 0, both
 *               from a counter-based generator addressed by interval index.
 */
class DrivingSystem {
public:
    static DrivingSystem constant(std::vector<double> values);
    static DrivingSystem periodic(std::vector<double> lower, std::vector<double> upper, double period,
                                  std::vector<double> phases);
    /// Periodic driver whose phases are drawn from `seed`.
    static DrivingSystem periodic(std::vector<double> lower, std::vector<double> upper, double period,
                                  std::uint64_t seed);
    static DrivingSystem telegraph(std::vector<double> lower, std::vector<double> upper,
                                   double mean_holding_time, std::uint64_t seed);

    DriverModel model() const noexcept { return model_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t n_coeffs() const noexcept { return lower_.size(); }
    /// Number of Markov states N = n_coeffs / 2 + 1.
    std::size_t states() const noexcept { return lower_.size() / 2 + 1; }
    const std::vector<double>& lower_bounds() const noexcept { return lower_; }
    const std::vector<double>& upper_bounds() const noexcept { return upper_; }
    double period() const noexcept { return period_; }
    const std::vector<double>& phases() const noexcept { return phases_; }
    double mean_holding_time() const noexcept { return holding_; }
    double time_offset() const noexcept { return offset_; }

    /// True when the path is constant between the times reported by discontinuities_in.
    bool piecewise_constant() const noexcept { return model_ != DriverModel::periodic; }

    bool operator==(const DrivingSystem&) const = default;

private:
    friend DrivingSystem shift(const DrivingSystem& d, double s);

    DrivingSystem(DriverModel model, std::vector<double> lower, std::vector<double> upper);

    DriverModel model_;
    std::uint64_t seed_ = 0;
    std::vector<double> lower_;
    std::vector<double> upper_;
    double period_ = 0.0;
    std::vector<double> phases_;
    double holding_ = 0.0;
    double offset_ = 0.0;
};

struct CoefficientSample {
    double t = 0.0;
    std::vector<double> values;
};

/// Piecewise-constant view of a path on a window: values[k] holds on
/// [starts[k], starts[k+1]), the last piece extending to the window end.
struct CoefficientSchedule {
    std::vector<double> starts;
    std::vector<std::vector<double>> values;

    /// Index of the piece containing t (clamped to the window).
    std::size_t piece_at(double t) const;
};

/// q(theta_{t + offset} omega). Negative t is allowed.
CoefficientSample coefficients_at(const DrivingSystem& d, double t);

/// theta_s: the same path observed with its clock advanced by s.
DrivingSystem shift(const DrivingSystem& d, double s);

/// Sorted jump times of the whole coefficient path in the open interval (t0, t1).
std::vector<double> discontinuities_in(const DrivingSystem& d, double t0, double t1);

/// Jump times of a single coefficient stream in (t0, t1).
std::vector<double> stream_discontinuities(const DrivingSystem& d, std::size_t stream, double t0,
                                           double t1);

/// Piece decomposition of [t0, t1]; requires d.piecewise_constant().
CoefficientSchedule schedule(const DrivingSystem& d, double t0, double t1);

}  // namespace rmc
