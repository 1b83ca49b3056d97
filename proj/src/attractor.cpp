#include "rmc/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmc/error.hpp"
#include "rmc/philox.hpp"
#include "rmc/projective.hpp"

namespace rmc {

namespace {

std::vector<double> mean_column(const StateBlock& b) {
    std::vector<double> mean(b.n(), 0.0);
    for (std::size_t j = 0; j < b.m(); ++j) {
        const auto c = b.column(j);
        for (std::size_t i = 0; i < b.n(); ++i) mean[i] += c[i];
    }
    for (double& x : mean) x /= static_cast<double>(b.m());
    return mean;
}

std::vector<double> normalized(std::vector<double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
    return v;
}

// purposes within a sample point's counter space
constexpr std::uint32_t kPurposeComponent = 0;
constexpr std::uint32_t kPurposeBoundaryIndex = 1;

std::vector<double> dirichlet_point(const Philox4x32& rng, std::uint32_t k, std::uint32_t which,
                                    std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.exponential(k, which * 16 + kPurposeComponent, i);
    return normalized(std::move(v));
}

std::vector<double> near_uniform_point(const Philox4x32& rng, std::uint32_t k, std::uint32_t which,
                                       std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = 1.0 + 0.5 * (2.0 * rng.uniform(k, which * 16 + kPurposeComponent, i) - 1.0);
    }
    return normalized(std::move(v));
}

// One coordinate pinned at the margin, the rest at least the margin.
std::vector<double> boundary_point(const Philox4x32& rng, std::uint32_t k, std::uint32_t which,
                                   std::size_t n) {
    const double m = kBoundarySampleMargin;
    const auto pinned = std::min(
        n - 1, static_cast<std::size_t>(rng.uniform(k, which * 16 + kPurposeBoundaryIndex, 0) *
                                        static_cast<double>(n)));
    std::vector<double> w(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == pinned) continue;
        w[i] = rng.exponential(k, which * 16 + kPurposeComponent, i);
        total += w[i];
    }
    const double free_mass = 1.0 - static_cast<double>(n) * m;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i == pinned ? m : m + free_mass * w[i] / total;
    return v;
}

void require_converged(const AttractorPath& path, const char* op) {
    if (!path.converged) throw InvalidArgument(std::string(op) + " requires a converged attractor path");
}

}  // namespace

PullbackResult pullback_point(const DrivingSystem& d, double T, double tol, double step) {
    if (!std::isfinite(T) || T < 0.0) throw InvalidArgument("pullback horizon must be finite and >= 0");
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    const std::size_t n = d.states();
    const StateBlock images = T == 0.0 ? StateBlock::identity(n) : propagator(shift(d, -T), 0.0, T, step);

    PullbackResult r;
    r.images.reserve(n);
    for (std::size_t j = 0; j < n; ++j) r.images.push_back(images.column_vector(j));
    r.point = ProbabilityVector(mean_column(images), kAttractorMassTolerance);
    r.diameter = hilbert_diameter(std::span<const std::vector<double>>(r.images));
    r.max_norm_diameter = max_norm_diameter(r.images);
    r.converged = r.diameter <= tol;
    return r;
}

AttractorPath attractor_path(const DrivingSystem& d, std::span<const double> times, double T,
                             double tol, double step, Execution exec) {
    if (!(T > 0.0)) throw InvalidArgument("attractor_path requires T > 0");
    if (times.empty()) throw InvalidArgument("attractor_path requires at least one time");
    const auto results = map_indexed(
        times.size(), [&](std::size_t i) { return pullback_point(shift(d, times[i]), T, tol, step); }, exec);

    AttractorPath path;
    path.times.assign(times.begin(), times.end());
    path.pullback_horizon = T;
    path.tolerance = tol;
    path.converged = true;
    for (const auto& r : results) {
        path.points.push_back(r.point);
        path.diameters.push_back(r.diameter);
        path.final_diameter = std::max(path.final_diameter, r.diameter);
        path.converged = path.converged && r.converged;
    }
    return path;
}

double verify_invariance(const DrivingSystem& d, const AttractorPath& path, double step, Execution exec) {
    require_converged(path, "verify_invariance");
    if (path.times.size() < 2) throw InvalidArgument("verify_invariance needs at least two path times");
    for (std::size_t j = 0; j + 1 < path.times.size(); ++j) {
        if (!(path.times[j + 1] > path.times[j])) throw InvalidArgument("path times must increase");
    }
    const auto errors = map_indexed(
        path.times.size() - 1,
        [&](std::size_t j) {
            const double s = path.times[j + 1] - path.times[j];
            const auto image = cocycle(shift(d, path.times[j]), s, path.points[j].values(), step);
            return max_norm_distance(image, path.points[j + 1].values());
        },
        exec);
    return *std::max_element(errors.begin(), errors.end());
}

std::vector<double> forward_error(const DrivingSystem& d, const ProbabilityVector& p0,
                                  const AttractorPath& path, double step) {
    require_converged(path, "forward_error");
    if (!(boundary_margin(p0) > 0.0)) throw InvalidArgument("forward_error requires p0 in the open simplex");
    if (path.times.empty() || path.times.front() < 0.0) {
        throw InvalidArgument("forward_error requires non-negative path times");
    }
    const auto states = propagate_at(d, StateBlock::from_column(p0.values()), 0.0, path.times, step);
    std::vector<double> err(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        err[i] = max_norm_distance(states[i].column(0), path.points[i].values());
    }
    return err;
}

std::pair<std::vector<double>, std::vector<double>> contraction_sample_pair(std::size_t n,
                                                                          std::uint64_t seed,
                                                                          std::size_t k) {
    const Philox4x32 rng(seed);
    const auto idx = static_cast<std::uint32_t>(k);
    switch (k % 4) {
        case 0: return {near_uniform_point(rng, idx, 0, n), near_uniform_point(rng, idx, 1, n)};
        case 1: return {dirichlet_point(rng, idx, 0, n), dirichlet_point(rng, idx, 1, n)};
        case 2: return {boundary_point(rng, idx, 0, n), boundary_point(rng, idx, 1, n)};
        default: return {dirichlet_point(rng, idx, 0, n), boundary_point(rng, idx, 1, n)};
    }
}

ContractionReport estimate_contraction(const DrivingSystem& d, double T_c, std::size_t n_pairs,
                                       std::uint64_t seed, double step, Execution exec) {
    if (!std::isfinite(T_c) || T_c < 0.0) throw InvalidArgument("T_c must be finite and >= 0");
    if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
    const std::size_t n = d.states();
    // phi(T_c, omega, .) is linear, so one fundamental matrix serves every pair
    const StateBlock phi = T_c == 0.0 ? StateBlock::identity(n) : propagator(d, 0.0, T_c, step);
    auto image = [&](const std::vector<double>& x) {
        std::vector<double> y(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const auto c = phi.column(j);
            for (std::size_t i = 0; i < n; ++i) y[i] += c[i] * x[j];
        }
        return y;
    };

    struct PairRatio {
        double ratio = -1.0;  // negative marks a skipped pair
    };
    const auto ratios = map_indexed(
        n_pairs,
        [&](std::size_t k) {
            const auto [x, y] = contraction_sample_pair(n, seed, k);
            const double before = hilbert_metric_unchecked(x, y);
            if (!(before >= kMinPairDistance)) return PairRatio{};
            return PairRatio{T_c == 0.0 ? 1.0 : hilbert_metric_unchecked(image(x), image(y)) / before};
        },
        exec);

    ContractionReport report;
    report.T_c = T_c;
    report.n_pairs = n_pairs;
    std::size_t best = n_pairs;
    for (std::size_t k = 0; k < n_pairs; ++k) {
        if (ratios[k].ratio < 0.0) continue;
        ++report.n_used;
        if (best == n_pairs || ratios[k].ratio > report.lambda_estimate) {
            report.lambda_estimate = ratios[k].ratio;
            best = k;
        }
    }
    if (best < n_pairs) report.max_ratio_pair = contraction_sample_pair(n, seed, best);
    return report;
}

DecayFit decay_rate(std::span<const std::pair<double, double>> diameters) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [T, diam] : diameters) {
        if (std::isfinite(T) && std::isfinite(diam) && diam > 0.0) pts.emplace_back(T, std::log(diam));
    }
    if (pts.size() < 3) throw InvalidArgument("decay_rate needs at least 3 finite positive diameters");
    const double m = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw InvalidArgument("decay_rate needs at least two distinct horizons");
    DecayFit fit;
    fit.rate = sxy / sxx;
    fit.intercept = my - fit.rate * mx;
    double ss_res = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (fit.intercept + fit.rate * x);
        ss_res += r * r;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    fit.points_used = pts.size();
    return fit;
}

std::vector<EulerComparison> euler_attractor_comparison(const DrivingSystem& d,
                                                        std::span<const double> deltas, double T,
                                                        double tol, double step) {
    if (!(T > 0.0)) throw InvalidArgument("euler_attractor_comparison requires T > 0");
    const double max_delta = max_euler_step(d);
    for (double delta : deltas) {
        if (!(delta > 0.0)) throw InvalidArgument("Euler steps must be positive");
        if (delta > max_delta) throw InadmissibleStep(delta, max_delta);
    }
    const PullbackResult continuous = pullback_point(d, T, tol, step);
    std::vector<EulerComparison> out;
    for (double delta : deltas) {
        const long n_steps = std::max(1L, std::lround(T / delta));
        const double t0 = -static_cast<double>(n_steps) * delta;
        const StateBlock images = euler_propagate(d, StateBlock::identity(d.states()), t0, n_steps, delta);
        EulerComparison c;
        c.delta = delta;
        c.discrete_point = mean_column(images);
        c.distance = max_norm_distance(c.discrete_point, continuous.point.values());
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace rmc
