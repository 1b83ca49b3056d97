#include "rmc/projective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmc/error.hpp"

namespace rmc {

namespace {

struct RatioExtremes {
    double max_xy = 0.0;  // max x_i / y_i
    double max_yx = 0.0;  // max y_i / x_i
    bool same_support = true;
};

RatioExtremes ratio_extremes(std::span<const double> x, std::span<const double> y) noexcept {
    RatioExtremes r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const bool xz = x[i] == 0.0;
        const bool yz = y[i] == 0.0;
        if (xz && yz) continue;
        if (xz != yz) {
            r.same_support = false;
            return r;
        }
        r.max_xy = std::max(r.max_xy, x[i] / y[i]);
        r.max_yx = std::max(r.max_yx, y[i] / x[i]);
    }
    return r;
}

void require_same_size(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatch(x.size(), y.size());
}

}  // namespace

ConeVector::ConeVector(std::vector<double> values) : values_(std::move(values)) {
    bool nonzero = false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
            throw InvalidArgument("cone vector component " + std::to_string(i) +
                                  " is negative or non-finite");
        }
        nonzero = nonzero || values_[i] > 0.0;
    }
    if (!nonzero) throw InvalidArgument("cone vector must be nonzero");
}

double hilbert_metric_unchecked(std::span<const double> x, std::span<const double> y) noexcept {
    const RatioExtremes r = ratio_extremes(x, y);
    if (!r.same_support) return kInfinity;
    // both maxima are >= 1 up to rounding; clamp keeps the result nonnegative
    return std::max(0.0, std::log(r.max_xy) + std::log(r.max_yx));
}

double hilbert_metric(const ConeVector& x, const ConeVector& y) {
    require_same_size(x, y);
    return hilbert_metric_unchecked(x, y);
}

double log_ratio_quotient(const ConeVector& x, const ConeVector& y) {
    require_same_size(x, y);
    const RatioExtremes r = ratio_extremes(x, y);
    if (!r.same_support) return kInfinity;
    return std::abs(std::log(r.max_yx / r.max_xy));
}

double hilbert_diameter(std::span<const ConeVector> points) {
    if (points.size() < 2) throw InvalidArgument("diameter needs at least two points");
    double diam = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            diam = std::max(diam, hilbert_metric(points[i], points[j]));
        }
    }
    return diam;
}

double hilbert_diameter(std::span<const std::vector<double>> points) {
    std::vector<ConeVector> cone;
    cone.reserve(points.size());
    for (const auto& p : points) cone.emplace_back(p);
    return hilbert_diameter(std::span<const ConeVector>(cone));
}

double max_norm_diameter(std::span<const std::vector<double>> points) {
    if (points.size() < 2) throw InvalidArgument("diameter needs at least two points");
    double diam = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            diam = std::max(diam, max_norm_distance(points[i], points[j]));
        }
    }
    return diam;
}

double boundary_margin(std::span<const double> p) noexcept {
    return p.empty() ? 0.0 : *std::min_element(p.begin(), p.end());
}

double boundary_margin(const ProbabilityVector& p) noexcept { return boundary_margin(p.values()); }

double max_norm_distance(std::span<const double> a, std::span<const double> b) {
    require_same_size(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace rmc
