#include "esboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "esboot/parallel.hpp"

namespace esboot {

namespace {

constexpr std::size_t kMinReplicates = 100;
constexpr double kMaxFailureRate = 0.05;

}  // namespace

BootstrapContext BootstrapContext::make(std::vector<double> returns, FitResult fit, double alpha,
                                        QmleOptions options) {
    if (fit.residuals.size() != returns.size() || fit.filter_at_opt.sigma2.size() != returns.size() + 1) {
        throw std::invalid_argument("BootstrapContext: fit does not match the return series");
    }
    const EsEstimate es = conditional_es(fit, alpha);
    BootstrapContext ctx;
    ctx.returns = std::move(returns);
    ctx.fit = std::move(fit);
    ctx.alpha = alpha;
    ctx.es_hat = es.es_hat;
    ctx.options = std::move(options);
    return ctx;
}

BootstrapSample draw_bootstrap_sample(const BootstrapContext& ctx, RngStream& rng) {
    const std::size_t n = ctx.n();
    BootstrapSample s;
    s.eta_star.resize(n);
    s.eps_star.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        s.eta_star[t] = ctx.fit.residuals[rng.below(n)];
        s.eps_star[t] = std::sqrt(ctx.fit.filter_at_opt.sigma2[t]) * s.eta_star[t];
    }
    return s;
}

BootstrapReplicate replicate_from_sample(const BootstrapContext& ctx, const BootstrapSample& sample) {
    QmleOptions opts = ctx.options;
    opts.starts = {ctx.fit.theta_hat};

    BootstrapReplicate rep;
    try {
        const FitResult f = fit_fixed_design(ctx.returns, sample.eps_star, opts);
        const MuEstimate m = estimate_mu(f.residuals, ctx.alpha);
        rep.theta_star = f.theta_hat;
        rep.mu_star = m.mu_hat;
        rep.tail_count = m.tail_count;
        rep.es_star = m.mu_hat * std::sqrt(f.sigma2_next());
        rep.converged = f.converged && std::isfinite(rep.es_star);
    } catch (const std::exception&) {
        rep.converged = false;
    }
    return rep;
}

BootstrapReplicate bootstrap_replicate(const BootstrapContext& ctx, RngStream& rng) {
    return replicate_from_sample(ctx, draw_bootstrap_sample(ctx, rng));
}

BootstrapRun run_bootstrap(const BootstrapContext& ctx, std::size_t B, std::uint64_t master_seed,
                           std::size_t workers) {
    if (B < kMinReplicates) throw std::invalid_argument("run_bootstrap: B must be at least 100");
    BootstrapRun run;
    run.replicates.resize(B);
    parallel_for(B, workers, [&](std::size_t b) {
        RngStream rng = RngStream::derive(master_seed, StreamTag::Bootstrap, b);
        run.replicates[b] = bootstrap_replicate(ctx, rng);
    });
    run.failures = static_cast<std::size_t>(
        std::count_if(run.replicates.begin(), run.replicates.end(), [](const auto& r) { return !r.converged; }));
    if (static_cast<double>(run.failures) > kMaxFailureRate * static_cast<double>(B)) {
        std::ostringstream os;
        os << "bootstrap: " << run.failures << " of " << B << " replicates failed to converge (limit 5%)";
        throw BootstrapFailure(os.str(), run.failures);
    }
    return run;
}

IntervalSet intervals_from_deviations(std::span<const double> deviations, double es_hat, std::size_t n,
                                      double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("bootstrap intervals: gamma must lie in (0, 1)");
    const std::size_t B = deviations.size();
    if (B < kMinReplicates) throw std::invalid_argument("bootstrap intervals: need at least 100 replicates");

    std::vector<double> d(deviations.begin(), deviations.end());
    std::vector<double> ad(B);
    std::transform(d.begin(), d.end(), ad.begin(), [](double x) { return std::abs(x); });
    std::sort(d.begin(), d.end());
    std::sort(ad.begin(), ad.end());

    const double root_n = std::sqrt(static_cast<double>(n));
    const double g_lo = d[ceil_rank(gamma / 2.0, B) - 1] / root_n;
    const double g_hi = d[ceil_rank(1.0 - gamma / 2.0, B) - 1] / root_n;
    const double h = ad[ceil_rank(1.0 - gamma, B) - 1] / root_n;

    IntervalSet out;
    out.gamma = gamma;
    out.B_effective = B;
    out.ep = Interval{es_hat - g_hi, es_hat - g_lo, g_hi - g_lo};
    out.rt = Interval{es_hat + g_lo, es_hat + g_hi, g_hi - g_lo};
    out.sy = Interval{es_hat - h, es_hat + h, 2.0 * h};
    return out;
}

IntervalSet bootstrap_intervals(std::span<const BootstrapReplicate> replicates, double es_hat, std::size_t n,
                                double gamma) {
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<double> d;
    d.reserve(replicates.size());
    for (const auto& r : replicates) {
        if (r.converged) d.push_back(root_n * (r.es_star - es_hat));
    }
    return intervals_from_deviations(d, es_hat, n, gamma);
}

}  // namespace esboot
