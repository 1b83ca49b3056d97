#include "rmc/driving.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rmc/error.hpp"
#include "rmc/philox.hpp"

namespace rmc {

namespace {

constexpr std::uint32_t kTagForwardGap = 1;
constexpr std::uint32_t kTagBackwardGap = 2;
constexpr std::uint32_t kTagValue = 3;
constexpr std::uint32_t kTagPhase = 4;

void validate_bounds(const std::vector<double>& lower, const std::vector<double>& upper) {
    if (lower.size() != upper.size()) throw DimensionMismatch(lower.size(), upper.size());
    if (lower.size() < 2 || lower.size() % 2 != 0) {
        throw InvalidArgument("coefficient count must be even and at least 2, got " +
                              std::to_string(lower.size()));
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !(lower[i] > 0.0)) {
            throw CoefficientError(i, "lower bound violates 0<c_* (got " + std::to_string(lower[i]) + ")");
        }
        if (!std::isfinite(upper[i])) throw CoefficientError(i, "upper bound must be finite");
        if (lower[i] > upper[i]) {
            throw CoefficientError(i, "lower bound exceeds upper bound (c_* <= C_* required)");
        }
    }
}

struct Interval {
    double lo;
    double hi;
    std::int64_t index;
};

// One coefficient's renewal process. Interval k is [tau_k, tau_{k+1}) with
// tau_0 = 0; k >= 0 extends forward, k < 0 backward. Both walks always start
// at 0 so every query reproduces the same boundary arithmetic.
class RenewalStream {
public:
    RenewalStream(const Philox4x32& rng, std::uint32_t stream, double holding)
        : rng_(rng), stream_(stream), holding_(holding) {}

    Interval locate(double a) const {
        if (a >= 0.0) {
            Interval iv{0.0, forward_gap(0), 0};
            while (a >= iv.hi) iv = next_forward(iv);
            return iv;
        }
        Interval iv{-backward_gap(0), 0.0, -1};
        while (a < iv.lo) iv = next_backward(iv);
        return iv;
    }

    // Intervals overlapping [a, b], ascending.
    std::vector<Interval> covering(double a, double b) const {
        std::vector<Interval> out;
        if (a < 0.0) {
            Interval iv{-backward_gap(0), 0.0, -1};
            for (;;) {
                if (iv.lo < b) out.push_back(iv);
                if (iv.lo <= a) break;
                iv = next_backward(iv);
            }
            std::reverse(out.begin(), out.end());
        }
        if (b >= 0.0) {
            Interval iv{0.0, forward_gap(0), 0};
            for (;;) {
                if (iv.hi > a) out.push_back(iv);
                if (iv.hi > b) break;
                iv = next_forward(iv);
            }
        }
        return out;
    }

    double value(std::int64_t index, double lo, double hi) const {
        const double u = rng_.uniform(stream_, kTagValue, static_cast<std::uint64_t>(index));
        return std::min(hi, lo + (hi - lo) * u);
    }

private:
    double forward_gap(std::int64_t k) const {
        return holding_ * rng_.exponential(stream_, kTagForwardGap, static_cast<std::uint64_t>(k));
    }
    double backward_gap(std::int64_t k) const {
        return holding_ * rng_.exponential(stream_, kTagBackwardGap, static_cast<std::uint64_t>(k));
    }
    Interval next_forward(const Interval& iv) const {
        return {iv.hi, iv.hi + forward_gap(iv.index + 1), iv.index + 1};
    }
    Interval next_backward(const Interval& iv) const {
        // interval -m (m >= 1) has length backward_gap(m - 1)
        const std::int64_t k = iv.index - 1;
        return {iv.lo - backward_gap(-k - 1), iv.lo, k};
    }

    const Philox4x32& rng_;
    std::uint32_t stream_;
    double holding_;
};

std::vector<double> local_jumps(std::vector<double> absolute, double offset, double t0, double t1) {
    std::vector<double> out;
    out.reserve(absolute.size());
    for (double a : absolute) {
        const double t = a - offset;
        if (t > t0 && t < t1) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::string_view to_string(DriverModel model) {
    switch (model) {
        case DriverModel::constant: return "constant";
        case DriverModel::periodic: return "periodic";
        case DriverModel::telegraph: return "telegraph";
    }
    return "unknown";
}

DriverModel parse_driver_model(std::string_view name) {
    if (name == "constant") return DriverModel::constant;
    if (name == "periodic") return DriverModel::periodic;
    if (name == "telegraph") return DriverModel::telegraph;
    throw InvalidArgument("unknown driver model '" + std::string(name) +
                          "' (expected constant, periodic or telegraph)");
}

DrivingSystem::DrivingSystem(DriverModel model, std::vector<double> lower, std::vector<double> upper)
    : model_(model), lower_(std::move(lower)), upper_(std::move(upper)) {
    validate_bounds(lower_, upper_);
}

DrivingSystem DrivingSystem::constant(std::vector<double> values) {
    std::vector<double> upper = values;
    return DrivingSystem(DriverModel::constant, std::move(values), std::move(upper));
}

DrivingSystem DrivingSystem::periodic(std::vector<double> lower, std::vector<double> upper,
                                      double period, std::vector<double> phases) {
    DrivingSystem d(DriverModel::periodic, std::move(lower), std::move(upper));
    if (!std::isfinite(period) || !(period > 0.0)) throw InvalidArgument("period must be positive");
    if (phases.size() != d.lower_.size()) throw DimensionMismatch(d.lower_.size(), phases.size());
    for (double p : phases) {
        if (!std::isfinite(p)) throw InvalidArgument("phases must be finite");
    }
    d.period_ = period;
    d.phases_ = std::move(phases);
    return d;
}

DrivingSystem DrivingSystem::periodic(std::vector<double> lower, std::vector<double> upper,
                                      double period, std::uint64_t seed) {
    const Philox4x32 rng(seed);
    std::vector<double> phases(lower.size());
    for (std::size_t i = 0; i < phases.size(); ++i) {
        phases[i] = 2.0 * std::numbers::pi * rng.uniform(static_cast<std::uint32_t>(i), kTagPhase, 0);
    }
    DrivingSystem d = periodic(std::move(lower), std::move(upper), period, std::move(phases));
    d.seed_ = seed;
    return d;
}

DrivingSystem DrivingSystem::telegraph(std::vector<double> lower, std::vector<double> upper,
                                       double mean_holding_time, std::uint64_t seed) {
    DrivingSystem d(DriverModel::telegraph, std::move(lower), std::move(upper));
    if (!std::isfinite(mean_holding_time) || !(mean_holding_time > 0.0)) {
        throw InvalidArgument("mean holding time must be positive");
    }
    d.holding_ = mean_holding_time;
    d.seed_ = seed;
    return d;
}

std::size_t CoefficientSchedule::piece_at(double t) const {
    const auto it = std::upper_bound(starts.begin(), starts.end(), t);
    return it == starts.begin() ? 0 : static_cast<std::size_t>(it - starts.begin()) - 1;
}

CoefficientSample coefficients_at(const DrivingSystem& d, double t) {
    const double a = t + d.time_offset();
    CoefficientSample s{t, {}};
    const auto& lo = d.lower_bounds();
    const auto& hi = d.upper_bounds();
    switch (d.model()) {
        case DriverModel::constant:
            s.values = lo;
            break;
        case DriverModel::periodic: {
            s.values.resize(lo.size());
            const double omega = 2.0 * std::numbers::pi / d.period();
            for (std::size_t i = 0; i < lo.size(); ++i) {
                const double mid = 0.5 * (lo[i] + hi[i]);
                const double amp = 0.5 * (hi[i] - lo[i]);
                s.values[i] = std::clamp(mid + amp * std::sin(omega * a + d.phases()[i]), lo[i], hi[i]);
            }
            break;
        }
        case DriverModel::telegraph: {
            s.values.resize(lo.size());
            const Philox4x32 rng(d.seed());
            for (std::size_t i = 0; i < lo.size(); ++i) {
                const RenewalStream stream(rng, static_cast<std::uint32_t>(i), d.mean_holding_time());
                s.values[i] = stream.value(stream.locate(a).index, lo[i], hi[i]);
            }
            break;
        }
    }
    return s;
}

DrivingSystem shift(const DrivingSystem& d, double s) {
    DrivingSystem out = d;
    out.offset_ = d.offset_ + s;
    return out;
}

std::vector<double> stream_discontinuities(const DrivingSystem& d, std::size_t stream, double t0,
                                           double t1) {
    if (stream >= d.n_coeffs()) throw InvalidArgument("stream index out of range");
    if (!(t0 < t1)) throw InvalidArgument("discontinuities_in requires t0 < t1");
    if (d.model() != DriverModel::telegraph) return {};
    const Philox4x32 rng(d.seed());
    const RenewalStream rs(rng, static_cast<std::uint32_t>(stream), d.mean_holding_time());
    const double off = d.time_offset();
    std::vector<double> abs;
    for (const Interval& iv : rs.covering(t0 + off, t1 + off)) abs.push_back(iv.lo);
    return local_jumps(std::move(abs), off, t0, t1);
}

std::vector<double> discontinuities_in(const DrivingSystem& d, double t0, double t1) {
    if (!(t0 < t1)) throw InvalidArgument("discontinuities_in requires t0 < t1");
    if (d.model() != DriverModel::telegraph) return {};
    const Philox4x32 rng(d.seed());
    const double off = d.time_offset();
    std::vector<double> abs;
    for (std::size_t i = 0; i < d.n_coeffs(); ++i) {
        const RenewalStream rs(rng, static_cast<std::uint32_t>(i), d.mean_holding_time());
        for (const Interval& iv : rs.covering(t0 + off, t1 + off)) abs.push_back(iv.lo);
    }
    return local_jumps(std::move(abs), off, t0, t1);
}

CoefficientSchedule schedule(const DrivingSystem& d, double t0, double t1) {
    if (!d.piecewise_constant()) throw InvalidArgument("schedule requires a piecewise-constant driver");
    if (!(t0 <= t1)) throw InvalidArgument("schedule requires t0 <= t1");
    if (d.model() == DriverModel::constant) return {{t0}, {d.lower_bounds()}};

    const Philox4x32 rng(d.seed());
    const double off = d.time_offset();
    const double a = t0 + off;
    const double b = t1 + off;
    const std::size_t m = d.n_coeffs();

    std::vector<std::vector<Interval>> per_stream(m);
    std::vector<double> cuts;
    for (std::size_t i = 0; i < m; ++i) {
        const RenewalStream rs(rng, static_cast<std::uint32_t>(i), d.mean_holding_time());
        per_stream[i] = rs.covering(a, b);
        for (const Interval& iv : per_stream[i]) {
            if (iv.lo > a && iv.lo < b) cuts.push_back(iv.lo);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    CoefficientSchedule out;
    out.starts.reserve(cuts.size() + 1);
    out.values.reserve(cuts.size() + 1);
    std::vector<std::size_t> cursor(m, 0);
    auto emit = [&](double abs_start, double local_start) {
        std::vector<double> v(m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& ivs = per_stream[i];
            while (cursor[i] + 1 < ivs.size() && ivs[cursor[i] + 1].lo <= abs_start) ++cursor[i];
            const Interval& iv = ivs[cursor[i]];
            const RenewalStream rs(rng, static_cast<std::uint32_t>(i), d.mean_holding_time());
            v[i] = rs.value(iv.index, d.lower_bounds()[i], d.upper_bounds()[i]);
        }
        out.starts.push_back(local_start);
        out.values.push_back(std::move(v));
    };
    emit(a, t0);
    for (double c : cuts) {
        const double local = c - off;
        // a cut can round onto the previous start; merge rather than emit an empty piece
        if (local <= out.starts.back()) {
            const double prev = out.starts.back();
            out.values.pop_back();
            out.starts.pop_back();
            emit(c, prev);
            continue;
        }
        emit(c, local);
    }
    return out;
}

}  // namespace rmc
