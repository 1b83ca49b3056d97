#include "rmc/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rmc/error.hpp"

namespace rmc {

namespace {

void require_step(double step) {
    if (!std::isfinite(step) || !(step > 0.0)) throw InvalidArgument("step must be positive and finite");
}

long substeps(double length, double step) {
    return std::max(1L, static_cast<long>(std::ceil(length / step - 1e-9)));
}

// Scratch space for one RK4 step on a single column.
struct Rk4Scratch {
    explicit Rk4Scratch(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
    std::vector<double> k1, k2, k3, k4, tmp;
};

void rk4_column(const TridiagonalBands& qa, const TridiagonalBands& qm, const TridiagonalBands& qb,
                std::span<double> y, double h, Rk4Scratch& w) {
    const std::size_t n = y.size();
    apply_bands(qa, y, w.k1);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k1[i];
    apply_bands(qm, w.tmp, w.k2);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k2[i];
    apply_bands(qm, w.tmp, w.k3);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * w.k3[i];
    apply_bands(qb, w.tmp, w.k4);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += (h / 6.0) * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
    }
}

void advance_constant(const TridiagonalBands& q, StateBlock& y, double a, double b, double step,
                      Rk4Scratch& w) {
    const long steps = substeps(b - a, step);
    const double h = (b - a) / static_cast<double>(steps);
    for (std::size_t j = 0; j < y.m(); ++j) {
        auto col = y.column(j);
        for (long s = 0; s < steps; ++s) rk4_column(q, q, q, col, h, w);
    }
    if (!y.all_finite()) throw IntegrationError(b);
}

// Smooth time dependence: generator re-evaluated at each RK4 stage time.
void advance_varying(const DrivingSystem& d, StateBlock& y, double a, double b, double step,
                     Rk4Scratch& w) {
    const long steps = substeps(b - a, step);
    const double h = (b - a) / static_cast<double>(steps);
    TridiagonalGenerator qa, qm, qb;
    for (long s = 0; s < steps; ++s) {
        const double t = a + static_cast<double>(s) * h;
        rebuild_generator(qa, coefficients_at(d, t).values);
        rebuild_generator(qm, coefficients_at(d, t + 0.5 * h).values);
        rebuild_generator(qb, coefficients_at(d, t + h).values);
        for (std::size_t j = 0; j < y.m(); ++j) rk4_column(qa.bands(), qm.bands(), qb.bands(), y.column(j), h, w);
        if (!y.all_finite()) throw IntegrationError(t + h);
    }
}

std::vector<double> sample_grid(double t0, double t1, double sample_every) {
    if (!std::isfinite(sample_every) || !(sample_every > 0.0)) {
        throw InvalidArgument("sample_every must be positive and finite");
    }
    std::vector<double> times;
    const double eps = 1e-12 * std::max(1.0, std::abs(t1));
    for (long k = 0;; ++k) {
        const double t = t0 + static_cast<double>(k) * sample_every;
        if (t >= t1 - eps) break;
        times.push_back(t);
    }
    times.push_back(t1);
    return times;
}

double mass(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TridiagonalBands euler_bands(const TridiagonalBands& q, double delta) {
    TridiagonalBands e;
    const std::size_t n = q.size();
    e.sub.resize(n - 1);
    e.sup.resize(n - 1);
    e.diag.resize(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        e.sub[k] = delta * q.sub[k];
        e.sup[k] = delta * q.sup[k];
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double out = (k + 1 < n ? e.sub[k] : 0.0) + (k > 0 ? e.sup[k - 1] : 0.0);
        e.diag[k] = 1.0 - out;
    }
    return e;
}

template <class OnStep>
void euler_walk(const DrivingSystem& d, StateBlock& y, double t0, long n_steps, double delta,
                OnStep&& on_step) {
    if (n_steps < 0) throw InvalidArgument("n_steps must be non-negative");
    if (!std::isfinite(delta) || !(delta > 0.0)) throw InvalidArgument("delta must be positive");
    const double max_delta = max_euler_step(d);
    if (delta > max_delta) throw InadmissibleStep(delta, max_delta);
    if (y.n() != d.states()) throw DimensionMismatch(d.states(), y.n());
    if (n_steps == 0) return;

    const double t_end = t0 + static_cast<double>(n_steps) * delta;
    CoefficientSchedule sched;
    if (d.piecewise_constant()) sched = schedule(d, t0, t_end);
    std::size_t piece = 0;
    TridiagonalGenerator q;
    TridiagonalBands e;
    std::vector<double> next(y.n());
    for (long s = 0; s < n_steps; ++s) {
        const double t = t0 + static_cast<double>(s) * delta;
        if (d.piecewise_constant()) {
            const std::size_t before = piece;
            while (piece + 1 < sched.starts.size() && sched.starts[piece + 1] <= t) ++piece;
            if (s == 0 || piece != before) {
                rebuild_generator(q, sched.values[piece]);
                e = euler_bands(q.bands(), delta);
            }
        } else {
            rebuild_generator(q, coefficients_at(d, t).values);
            e = euler_bands(q.bands(), delta);
        }
        for (std::size_t j = 0; j < y.m(); ++j) {
            auto col = y.column(j);
            apply_bands(e, col, next);
            std::copy(next.begin(), next.end(), col.begin());
        }
        if (!y.all_finite()) throw IntegrationError(t + delta);
        on_step(t + delta, y);
    }
}

}  // namespace

StateBlock StateBlock::identity(std::size_t n) {
    StateBlock b(n, n);
    for (std::size_t j = 0; j < n; ++j) b.column(j)[j] = 1.0;
    return b;
}

StateBlock StateBlock::from_column(std::span<const double> v) {
    StateBlock b(v.size(), 1);
    std::copy(v.begin(), v.end(), b.column(0).begin());
    return b;
}

std::vector<double> StateBlock::column_vector(std::size_t j) const {
    const auto c = column(j);
    return {c.begin(), c.end()};
}

bool StateBlock::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

std::vector<StateBlock> propagate_at(const DrivingSystem& d, StateBlock y, double t0,
                                     std::span<const double> times, double step) {
    require_step(step);
    if (!std::isfinite(t0)) throw InvalidArgument("t0 must be finite");
    if (y.n() != d.states()) throw DimensionMismatch(d.states(), y.n());
    if (!y.all_finite()) throw InvalidArgument("initial state must be finite");
    double prev = t0;
    for (double t : times) {
        if (!std::isfinite(t) || t < prev) {
            throw InvalidArgument("output times must be finite, non-decreasing and >= t0");
        }
        prev = t;
    }
    std::vector<StateBlock> out;
    out.reserve(times.size());
    if (times.empty()) return out;

    Rk4Scratch w(y.n());
    double t = t0;
    if (d.piecewise_constant()) {
        const CoefficientSchedule sched = schedule(d, t0, times.back());
        std::size_t piece = 0;
        TridiagonalGenerator q;
        rebuild_generator(q, sched.values[0]);
        for (double target : times) {
            while (t < target) {
                const double cut = piece + 1 < sched.starts.size() ? sched.starts[piece + 1] : kInfinity;
                if (cut <= t) {
                    rebuild_generator(q, sched.values[++piece]);
                    continue;
                }
                const double b = std::min(target, cut);
                advance_constant(q.bands(), y, t, b, step, w);
                t = b;
                if (b == cut) rebuild_generator(q, sched.values[++piece]);
            }
            out.push_back(y);
        }
    } else {
        for (double target : times) {
            if (target > t) {
                advance_varying(d, y, t, target, step, w);
                t = target;
            }
            out.push_back(y);
        }
    }
    return out;
}

StateBlock propagate(const DrivingSystem& d, StateBlock y0, double t0, double t1, double step) {
    if (!(t1 >= t0)) throw InvalidArgument("propagate requires t1 >= t0");
    const double target[] = {t1};
    return std::move(propagate_at(d, std::move(y0), t0, target, step).front());
}

StateBlock propagator(const DrivingSystem& d, double t0, double t1, double step) {
    return propagate(d, StateBlock::identity(d.states()), t0, t1, step);
}

Trajectory integrate_rde(const DrivingSystem& d, std::span<const double> p0, double t0, double t1,
                         double step, double sample_every) {
    if (!(t0 < t1)) throw InvalidArgument("integrate_rde requires t0 < t1");
    const std::vector<double> times = sample_grid(t0, t1, sample_every);
    const auto blocks = propagate_at(d, StateBlock::from_column(p0), t0, times, step);
    Trajectory tr;
    tr.times = times;
    tr.states.reserve(blocks.size());
    const double m0 = mass(p0);
    for (const auto& b : blocks) {
        tr.states.push_back(b.column_vector(0));
        tr.mass_drift = std::max(tr.mass_drift, std::abs(mass(tr.states.back()) - m0));
    }
    return tr;
}

std::vector<double> cocycle(const DrivingSystem& d, double t, std::span<const double> p0, double step) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("cocycle requires finite t >= 0");
    if (p0.size() != d.states()) throw DimensionMismatch(d.states(), p0.size());
    if (t == 0.0) return {p0.begin(), p0.end()};
    return propagate(d, StateBlock::from_column(p0), 0.0, t, step).column_vector(0);
}

Trajectory comparison_trajectory(const ComparisonMatrix& qbar, std::span<const double> q0, double t1,
                                 double step, double sample_every) {
    require_step(step);
    if (q0.size() != qbar.n()) throw DimensionMismatch(qbar.n(), q0.size());
    if (!(t1 > 0.0)) throw InvalidArgument("comparison_trajectory requires t1 > 0");
    Trajectory tr;
    tr.times = sample_grid(0.0, t1, sample_every);
    StateBlock y = StateBlock::from_column(q0);
    Rk4Scratch w(y.n());
    double t = 0.0;
    const double m0 = mass(q0);
    for (double target : tr.times) {
        if (target > t) {
            advance_constant(qbar.bands(), y, t, target, step, w);
            t = target;
        }
        tr.states.push_back(y.column_vector(0));
        tr.mass_drift = std::max(tr.mass_drift, std::abs(mass(tr.states.back()) - m0));
    }
    return tr;
}

std::vector<double> integrate_comparison(const ComparisonMatrix& qbar, std::span<const double> q0,
                                         double t, double step) {
    require_step(step);
    if (q0.size() != qbar.n()) throw DimensionMismatch(qbar.n(), q0.size());
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("integrate_comparison requires t >= 0");
    if (t == 0.0) return {q0.begin(), q0.end()};
    StateBlock y = StateBlock::from_column(q0);
    Rk4Scratch w(y.n());
    advance_constant(qbar.bands(), y, 0.0, t, step, w);
    return y.column_vector(0);
}

DenseMatrix transition_matrix_euler(const TridiagonalGenerator& q, double delta) {
    if (!std::isfinite(delta) || !(delta > 0.0)) throw InvalidArgument("delta must be positive");
    const double max_delta = 1.0 / q.max_abs_diag();
    if (delta > max_delta) throw InadmissibleStep(delta, max_delta);
    const TridiagonalBands e = euler_bands(q.bands(), delta);
    const std::size_t n = q.n();
    DenseMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = e.diag[k];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        m(k + 1, k) = e.sub[k];
        m(k, k + 1) = e.sup[k];
    }
    return m;
}

double max_euler_step(const DrivingSystem& d) noexcept {
    const auto& hi = d.upper_bounds();
    return 1.0 / (2.0 * *std::max_element(hi.begin(), hi.end()));
}

Trajectory euler_cocycle(const DrivingSystem& d, std::span<const double> p0, double t0, long n_steps,
                         double delta) {
    StateBlock y = StateBlock::from_column(p0);
    Trajectory tr;
    tr.times.push_back(t0);
    tr.states.emplace_back(p0.begin(), p0.end());
    const double m0 = mass(p0);
    euler_walk(d, y, t0, n_steps, delta, [&](double t, const StateBlock& b) {
        tr.times.push_back(t);
        tr.states.push_back(b.column_vector(0));
        tr.mass_drift = std::max(tr.mass_drift, std::abs(mass(tr.states.back()) - m0));
    });
    return tr;
}

StateBlock euler_propagate(const DrivingSystem& d, StateBlock y0, double t0, long n_steps, double delta) {
    euler_walk(d, y0, t0, n_steps, delta, [](double, const StateBlock&) {});
    return y0;
}

}  // namespace rmc
