#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "esboot/es_estimation.hpp"
#include "esboot/qmle.hpp"
#include "esboot/rng.hpp"

namespace esboot {

/// Everything a fixed-design replicate needs from the original sample.
struct BootstrapContext {
    std::vector<double> returns;  ///< original eps_1..eps_n
    FitResult fit;                ///< QML fit on `returns`
    double alpha = 0.0;
    double es_hat = 0.0;
    /// Bounds, init and tolerances for the replicate fits; starts are replaced
    /// by the single warm start theta_hat.
    QmleOptions options;

    /// Validates lengths (n residuals, n+1 volatilities) and computes es_hat.
    /// Throws std::invalid_argument for a non-convergent fit.
    static BootstrapContext make(std::vector<double> returns, FitResult fit, double alpha,
                                 QmleOptions options = {});

    std::size_t n() const noexcept { return returns.size(); }
};

struct BootstrapSample {
    std::vector<double> eta_star;  ///< resampled residuals
    std::vector<double> eps_star;  ///< sigma_t(theta_hat) * eta_star_t
};

struct BootstrapReplicate {
    GarchParams theta_star;
    double mu_star = 0.0;
    double es_star = 0.0;  ///< mu_star * sigma_{n+1}(theta_star), filtered on the original returns
    std::size_t tail_count = 0;
    bool converged = false;
};

/// Draws eta*_t uniformly with replacement from the residuals and rescales by
/// the fitted volatility path of the original sample.
BootstrapSample draw_bootstrap_sample(const BootstrapContext& ctx, RngStream& rng);

/// Steps 2-4 for a given bootstrap sample: fixed-design QML warm-started at
/// theta_hat, bootstrap residuals, mu* and ES*.
BootstrapReplicate replicate_from_sample(const BootstrapContext& ctx, const BootstrapSample& sample);

BootstrapReplicate bootstrap_replicate(const BootstrapContext& ctx, RngStream& rng);

class BootstrapFailure : public std::runtime_error {
public:
    BootstrapFailure(const std::string& what, std::size_t failures)
        : std::runtime_error(what), failures_(failures) {}
    std::size_t failures() const noexcept { return failures_; }

private:
    std::size_t failures_;
};

struct BootstrapRun {
    std::vector<BootstrapReplicate> replicates;  ///< index b uses stream (master_seed, b)
    std::size_t failures = 0;
};

/// B replicates; identical output for any worker count. Throws
/// BootstrapFailure when more than 5% of replicates fail to converge.
BootstrapRun run_bootstrap(const BootstrapContext& ctx, std::size_t B, std::uint64_t master_seed,
                           std::size_t workers = 1);

struct IntervalSet {
    Interval ep;  ///< equal-tailed percentile
    Interval rt;  ///< reversed tails
    Interval sy;  ///< symmetric
    double gamma = 0.0;
    std::size_t B_effective = 0;
};

/// EP, RT and SY intervals from convergent replicates. Quantiles of the
/// bootstrap law use order-statistic rank ceil(p B). Throws
/// std::invalid_argument with fewer than 100 usable replicates.
IntervalSet bootstrap_intervals(std::span<const BootstrapReplicate> replicates, double es_hat, std::size_t n,
                                double gamma);

/// Same construction from the scaled deviations d_b = sqrt(n)(ES*_b - ES_hat).
IntervalSet intervals_from_deviations(std::span<const double> deviations, double es_hat, std::size_t n,
                                      double gamma);

}  // namespace esboot
