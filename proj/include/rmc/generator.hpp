#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmc {

/// Small row-major dense matrix; used for Euler transition matrices and exports.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Three bands of an N x N tridiagonal matrix. sub[k] sits at (k+1, k), sup[k] at (k, k+1).
struct TridiagonalBands {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;

    std::size_t size() const noexcept { return diag.size(); }
    bool operator==(const TridiagonalBands&) const = default;
};

/// out = A * in for a banded matrix, O(N). Spans must have length N.
void apply_bands(const TridiagonalBands& a, std::span<const double> in, std::span<double> out) noexcept;

/**
 * Birth-death generator Q built from coefficients (q_1, ..., q_{2N-2}).
 * Even 0-based indices feed the subdiagonal, odd ones the superdiagonal;
 * the diagonal is always derived so that every column sums to exactly zero.
 */
class TridiagonalGenerator {
public:
    std::size_t n() const noexcept { return bands_.size(); }
    const std::vector<double>& sub() const noexcept { return bands_.sub; }
    const std::vector<double>& sup() const noexcept { return bands_.sup; }
    const std::vector<double>& diag() const noexcept { return bands_.diag; }
    const TridiagonalBands& bands() const noexcept { return bands_; }

    double max_abs_diag() const noexcept;
    DenseMatrix dense() const;

    bool operator==(const TridiagonalGenerator&) const = default;

private:
    friend TridiagonalGenerator build_generator(std::span<const double> coeffs);
    friend void rebuild_generator(TridiagonalGenerator& q, std::span<const double> coeffs);
    TridiagonalBands bands_;
};

/// Deterministic entrywise lower bound Qbar of every generator whose
/// coefficients lie in the given per-coefficient bounds.
class ComparisonMatrix {
public:
    std::size_t n() const noexcept { return bands_.size(); }
    const std::vector<double>& sub() const noexcept { return bands_.sub; }
    const std::vector<double>& sup() const noexcept { return bands_.sup; }
    const std::vector<double>& diag() const noexcept { return bands_.diag; }
    const TridiagonalBands& bands() const noexcept { return bands_; }
    DenseMatrix dense() const;

    /// True when q - Qbar >= 0 entrywise.
    bool bounds_below(const TridiagonalGenerator& q) const noexcept;

    bool operator==(const ComparisonMatrix&) const = default;

private:
    friend ComparisonMatrix comparison_matrix(std::span<const double> lower,
                                              std::span<const double> upper);
    TridiagonalBands bands_;
};

/// Element of the probability simplex.
class ProbabilityVector {
public:
    static constexpr double kSumTolerance = 1e-12;

    /// Validates nonnegativity and |sum - 1| <= tolerance.
    explicit ProbabilityVector(std::vector<double> values, double tolerance = kSumTolerance);

    static ProbabilityVector vertex(std::size_t n, std::size_t i);
    static ProbabilityVector barycenter(std::size_t n);

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    operator std::span<const double>() const noexcept { return values_; }

    bool operator==(const ProbabilityVector&) const = default;

private:
    std::vector<double> values_;
};

/// Throws CoefficientError naming the first non-positive coefficient, or
/// InvalidArgument for an odd or too-short coefficient vector.
TridiagonalGenerator build_generator(std::span<const double> coeffs);

/// Refills an existing generator in place (no allocation when sizes match).
/// Coefficients are trusted to be positive; used on integrator hot paths.
void rebuild_generator(TridiagonalGenerator& q, std::span<const double> coeffs);

std::vector<double> apply(const TridiagonalGenerator& q, std::span<const double> v);
std::vector<double> apply(const ComparisonMatrix& q, std::span<const double> v);

ComparisonMatrix comparison_matrix(std::span<const double> lower, std::span<const double> upper);

/// Birth-death product formula pi_{k+1} = (sub[k] / sup[k]) pi_k, normalized.
ProbabilityVector stationary_distribution(const TridiagonalGenerator& q);

}  // namespace rmc
