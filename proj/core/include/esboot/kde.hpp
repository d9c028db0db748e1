#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace esboot {

struct KdeCurve {
    std::vector<double> x;
    std::vector<double> density;
    double bandwidth = 0.0;
};

/// Silverman's rule of thumb 1.06 * sd * m^(-1/5).
double silverman_bandwidth(std::span<const double> values);

/// Gaussian-kernel density estimate of `values` evaluated on `grid`.
/// Needs at least 30 values; throws std::invalid_argument when the default
/// bandwidth degenerates to zero.
KdeCurve kde(std::span<const double> values, std::span<const double> grid,
             std::optional<double> bandwidth = std::nullopt);

std::vector<double> linear_grid(double lo, double hi, std::size_t points);

/// Trapezoid rule on a (not necessarily uniform) grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

/// Grid indices of strict interior local maxima.
std::vector<std::size_t> local_maxima(std::span<const double> y);

/// sup |F_a - F_b| between two empirical distribution functions.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// sup |F_a - Phi(x / sd)| for a centred normal with the given variance.
double ks_against_normal(std::span<const double> a, double variance);

}  // namespace esboot
