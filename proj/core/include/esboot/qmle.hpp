#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "esboot/volatility.hpp"

namespace esboot {

/// Compact search box for theta. Coordinates are omega in [omega_lo, omega_hi],
/// alpha in [0, alpha_hi], beta in [0, beta_hi], with alpha + beta <= persistence_cap.
struct ParamBounds {
    double omega_lo = 0.0;
    double omega_hi = 0.0;
    double alpha_hi = 0.999;
    double beta_hi = 0.999;
    double persistence_cap = 1.0 - 1e-6;

    /// omega in [1e-8 s2, 10 s2] with the default alpha/beta limits.
    static ParamBounds defaults_for(double s2);

    bool contains(const GarchParams& p) const noexcept;
    /// Reflects each coordinate back into the box, then projects onto
    /// alpha + beta <= persistence_cap when violated.
    GarchParams project(const GarchParams& p) const noexcept;
};

struct QmleOptions {
    std::optional<ParamBounds> bounds;  ///< unset: ParamBounds::defaults_for(s2)
    std::vector<GarchParams> starts;    ///< empty: default_starts(s2)
    double ftol = 1e-10;
    double xtol = 1e-8;
    int max_iter = 2000;
    /// Initial simplex edge, relative to each start coordinate (floored at 0.05).
    double initial_step = 0.1;
    InitScheme init = InitScheme::presample();
};

struct FitResult {
    GarchParams theta_hat;
    double loglik = 0.0;
    int iterations = 0;   ///< Nelder-Mead iterations of the winning start
    int evaluations = 0;  ///< criterion evaluations over all starts
    bool converged = false;
    FilterOutput filter_at_opt;
    std::vector<double> residuals;  ///< eta_t = data_t / sigma_t(theta_hat), t = 1..n

    std::size_t n() const noexcept { return residuals.size(); }
    double sigma2_next() const { return filter_at_opt.sigma2.back(); }
};

/// Gaussian quasi-log-likelihood (1/n) sum[-1/2 (eps_t/sigma_t)^2 - log sigma_t].
/// Returns -inf when the filter overflows or leaves (0, inf).
double criterion(const GarchParams& params, std::span<const double> returns,
                 InitScheme init = InitScheme::presample());

/// Fixed-design form: sigma_t(theta) is filtered from `filter_returns` while
/// the squared standardized terms use `data`. Both spans have length n.
double criterion(const GarchParams& params, std::span<const double> filter_returns,
                 std::span<const double> data, InitScheme init = InitScheme::presample());

/// {(s2(1-a-b), a, b)} for (a, b) in {(0.10, 0.80), (0.30, 0.50), (0.05, 0.90)}.
std::vector<GarchParams> default_starts(double s2);

/// Multistart Nelder-Mead maximization of the criterion over the box.
/// Throws std::invalid_argument when returns.size() < 50.
FitResult fit(std::span<const double> returns, const QmleOptions& options = {});

/// Maximizer of the fixed-design criterion. Bounds and starts default from
/// the second moment of `filter_returns`.
FitResult fit_fixed_design(std::span<const double> filter_returns, std::span<const double> data,
                           const QmleOptions& options);

}  // namespace esboot
