#include "rmc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rmc/error.hpp"

namespace rmc {

namespace {

void check_coefficient_count(std::size_t count) {
    if (count < 2 || count % 2 != 0) {
        throw InvalidArgument("coefficient count must be even and at least 2, got " +
                              std::to_string(count));
    }
}

void fill_bands(TridiagonalBands& b, std::span<const double> coeffs) {
    const std::size_t n = coeffs.size() / 2 + 1;
    b.sub.resize(n - 1);
    b.sup.resize(n - 1);
    b.diag.resize(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        b.sub[k] = coeffs[2 * k];
        b.sup[k] = coeffs[2 * k + 1];
    }
    // column k holds sup[k-1] above, diag[k], sub[k] below
    b.diag[0] = -b.sub[0];
    for (std::size_t k = 1; k + 1 < n; ++k) b.diag[k] = -(b.sup[k - 1] + b.sub[k]);
    b.diag[n - 1] = -b.sup[n - 2];
}

DenseMatrix dense_of(const TridiagonalBands& b) {
    const std::size_t n = b.size();
    DenseMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = b.diag[k];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        m(k + 1, k) = b.sub[k];
        m(k, k + 1) = b.sup[k];
    }
    return m;
}

}  // namespace

void apply_bands(const TridiagonalBands& a, std::span<const double> in, std::span<double> out) noexcept {
    const std::size_t n = a.size();
    out[0] = a.diag[0] * in[0] + a.sup[0] * in[1];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        out[k] = a.sub[k - 1] * in[k - 1] + a.diag[k] * in[k] + a.sup[k] * in[k + 1];
    }
    out[n - 1] = a.sub[n - 2] * in[n - 2] + a.diag[n - 1] * in[n - 1];
}

double TridiagonalGenerator::max_abs_diag() const noexcept {
    double m = 0.0;
    for (double d : bands_.diag) m = std::max(m, std::abs(d));
    return m;
}

DenseMatrix TridiagonalGenerator::dense() const { return dense_of(bands_); }
DenseMatrix ComparisonMatrix::dense() const { return dense_of(bands_); }

bool ComparisonMatrix::bounds_below(const TridiagonalGenerator& q) const noexcept {
    if (q.n() != n()) return false;
    for (std::size_t k = 0; k < n(); ++k) {
        if (q.diag()[k] < bands_.diag[k]) return false;
    }
    for (std::size_t k = 0; k + 1 < n(); ++k) {
        if (q.sub()[k] < bands_.sub[k] || q.sup()[k] < bands_.sup[k]) return false;
    }
    return true;
}

ProbabilityVector::ProbabilityVector(std::vector<double> values, double tolerance)
    : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("probability vector must be non-empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
            throw InvalidArgument("probability vector component " + std::to_string(i) +
                                  " is negative or non-finite");
        }
    }
    const double sum = std::accumulate(values_.begin(), values_.end(), 0.0);
    if (std::abs(sum - 1.0) > tolerance) {
        throw InvalidArgument("probability vector sums to " + std::to_string(sum) + ", not 1");
    }
}

ProbabilityVector ProbabilityVector::vertex(std::size_t n, std::size_t i) {
    std::vector<double> v(n, 0.0);
    v.at(i) = 1.0;
    return ProbabilityVector(std::move(v));
}

ProbabilityVector ProbabilityVector::barycenter(std::size_t n) {
    return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

TridiagonalGenerator build_generator(std::span<const double> coeffs) {
    check_coefficient_count(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!std::isfinite(coeffs[i]) || !(coeffs[i] > 0.0)) {
            throw CoefficientError(i, "off-diagonal rate must be positive and finite");
        }
    }
    TridiagonalGenerator q;
    fill_bands(q.bands_, coeffs);
    return q;
}

void rebuild_generator(TridiagonalGenerator& q, std::span<const double> coeffs) {
    fill_bands(q.bands_, coeffs);
}

std::vector<double> apply(const TridiagonalGenerator& q, std::span<const double> v) {
    if (v.size() != q.n()) throw DimensionMismatch(q.n(), v.size());
    std::vector<double> out(q.n());
    apply_bands(q.bands(), v, out);
    return out;
}

std::vector<double> apply(const ComparisonMatrix& q, std::span<const double> v) {
    if (v.size() != q.n()) throw DimensionMismatch(q.n(), v.size());
    std::vector<double> out(q.n());
    apply_bands(q.bands(), v, out);
    return out;
}

ComparisonMatrix comparison_matrix(std::span<const double> lower, std::span<const double> upper) {
    if (lower.size() != upper.size()) throw DimensionMismatch(lower.size(), upper.size());
    check_coefficient_count(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !(lower[i] > 0.0)) {
            throw CoefficientError(i, "lower bound violates 0<c_*");
        }
        if (!std::isfinite(upper[i]) || lower[i] > upper[i]) {
            throw CoefficientError(i, "lower bound exceeds upper bound (c_* <= C_* required)");
        }
    }
    ComparisonMatrix c;
    // off-diagonals from the infima, diagonal from the worst-case outflow
    fill_bands(c.bands_, upper);
    const std::size_t n = lower.size() / 2 + 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        c.bands_.sub[k] = lower[2 * k];
        c.bands_.sup[k] = lower[2 * k + 1];
    }
    return c;
}

ProbabilityVector stationary_distribution(const TridiagonalGenerator& q) {
    const std::size_t n = q.n();
    std::vector<double> pi(n);
    pi[0] = 1.0;
    for (std::size_t k = 0; k + 1 < n; ++k) pi[k + 1] = pi[k] * (q.sub()[k] / q.sup()[k]);
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& p : pi) p /= total;
    return ProbabilityVector(std::move(pi));
}

}  // namespace rmc
