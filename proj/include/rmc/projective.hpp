#pragma once

#include <span>
#include <vector>

#include "rmc/generator.hpp"

namespace rmc {

/// Nonzero vector of the closed nonnegative orthant.
class ConeVector {
public:
    /// Throws InvalidArgument on negative/non-finite entries or the zero vector.
    explicit ConeVector(std::vector<double> values);
    ConeVector(const ProbabilityVector& p) : values_(p.values()) {}  // NOLINT: simplex is inside the cone

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    operator std::span<const double>() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/**
 * Hilbert projective metric ln(max_i x_i/y_i * max_i y_i/x_i).
 *
 * Infinite when the zero patterns of x and y differ; positions where both
 * vanish are ignored. Zero exactly on proportional pairs.
 */
double hilbert_metric(const ConeVector& x, const ConeVector& y);

/// Unchecked variant for hot loops; x and y must be cone vectors of equal length.
double hilbert_metric_unchecked(std::span<const double> x, std::span<const double> y) noexcept;

/**
 * |ln(max_i(y_i/x_i) / max_i(x_i/y_i))|. Kept only for comparison with the
 * metric above: it is NOT a metric and vanishes on non-proportional pairs
 * such as (1, 1) and (2, 1/2).
 */
double log_ratio_quotient(const ConeVector& x, const ConeVector& y);

/// Largest pairwise Hilbert distance; needs at least two points.
double hilbert_diameter(std::span<const ConeVector> points);
double hilbert_diameter(std::span<const std::vector<double>> points);

/// Largest pairwise max-norm distance; finite even where the Hilbert diameter is not.
double max_norm_diameter(std::span<const std::vector<double>> points);

/// min_i p_i: radius certifying membership of the open simplex.
double boundary_margin(const ProbabilityVector& p) noexcept;
double boundary_margin(std::span<const double> p) noexcept;

/// Sup-norm distance between equal-length vectors.
double max_norm_distance(std::span<const double> a, std::span<const double> b);

}  // namespace rmc
