#include "esboot/qmle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "esboot/nelder_mead.hpp"

namespace esboot {

namespace {

constexpr std::size_t kMinObservations = 50;

double reflect_into(double v, double lo, double hi) {
    if (v < lo) v = lo + (lo - v);
    if (v > hi) v = hi - (v - hi);
    return std::clamp(v, lo, hi);
}

/// Precomputed squares for repeated criterion evaluation.
class CriterionEvaluator {
public:
    CriterionEvaluator(std::span<const double> filter_returns, std::span<const double> data, InitScheme init)
        : init_(init), x2_(filter_returns.size()), y2_(data.size()) {
        if (filter_returns.size() != data.size()) {
            throw std::invalid_argument("criterion: filter path and data differ in length");
        }
        if (filter_returns.empty()) throw std::invalid_argument("criterion: empty return series");
        for (std::size_t t = 0; t < x2_.size(); ++t) {
            if (!std::isfinite(filter_returns[t]) || !std::isfinite(data[t])) {
                throw std::invalid_argument("criterion: non-finite return");
            }
            x2_[t] = filter_returns[t] * filter_returns[t];
            y2_[t] = data[t] * data[t];
        }
        s2_ = second_moment(filter_returns);
    }

    double operator()(const GarchParams& p) const {
        double h = Garch11::initial_value(p, s2_, init_).first;
        double acc = 0.0;
        const std::size_t n = x2_.size();
        for (std::size_t t = 0; t < n; ++t) {
            if (!(h > 0.0)) return -std::numeric_limits<double>::infinity();
            acc += y2_[t] / h + std::log(h);
            h = p.omega + p.alpha * x2_[t] + p.beta * h;
        }
        const double value = -0.5 * acc / static_cast<double>(n);
        return std::isfinite(value) ? value : -std::numeric_limits<double>::infinity();
    }

    double s2() const noexcept { return s2_; }

private:
    InitScheme init_;
    std::vector<double> x2_;
    std::vector<double> y2_;
    double s2_ = 0.0;
};

}  // namespace

ParamBounds ParamBounds::defaults_for(double s2) {
    ParamBounds b;
    b.omega_lo = 1e-8 * s2;
    b.omega_hi = 10.0 * s2;
    return b;
}

bool ParamBounds::contains(const GarchParams& p) const noexcept {
    return p.omega >= omega_lo && p.omega <= omega_hi && p.alpha >= 0.0 && p.alpha <= alpha_hi &&
           p.beta >= 0.0 && p.beta <= beta_hi && p.alpha + p.beta <= persistence_cap;
}

GarchParams ParamBounds::project(const GarchParams& p) const noexcept {
    GarchParams q{reflect_into(p.omega, omega_lo, omega_hi), reflect_into(p.alpha, 0.0, alpha_hi),
                  reflect_into(p.beta, 0.0, beta_hi)};
    if (q.alpha + q.beta > persistence_cap) {
        const double excess = 0.5 * (q.alpha + q.beta - persistence_cap);
        q.alpha -= excess;
        q.beta -= excess;
        if (q.alpha < 0.0) {
            q.beta = persistence_cap;
            q.alpha = 0.0;
        } else if (q.beta < 0.0) {
            q.alpha = persistence_cap;
            q.beta = 0.0;
        }
        q.alpha = std::min(q.alpha, alpha_hi);
        q.beta = std::min(q.beta, beta_hi);
        q.alpha = std::min(q.alpha, persistence_cap - q.beta);
    }
    return q;
}

double criterion(const GarchParams& params, std::span<const double> returns, InitScheme init) {
    return CriterionEvaluator(returns, returns, init)(params);
}

double criterion(const GarchParams& params, std::span<const double> filter_returns, std::span<const double> data,
                 InitScheme init) {
    return CriterionEvaluator(filter_returns, data, init)(params);
}

std::vector<GarchParams> default_starts(double s2) {
    constexpr std::array<std::pair<double, double>, 3> ab{{{0.10, 0.80}, {0.30, 0.50}, {0.05, 0.90}}};
    std::vector<GarchParams> starts;
    for (auto [a, b] : ab) starts.push_back({s2 * (1.0 - a - b), a, b});
    return starts;
}

FitResult fit_fixed_design(std::span<const double> filter_returns, std::span<const double> data,
                           const QmleOptions& options) {
    if (filter_returns.size() < kMinObservations) {
        throw std::invalid_argument("fit: at least 50 observations are required");
    }
    const CriterionEvaluator eval(filter_returns, data, options.init);
    const double s2 = eval.s2();
    if (!(s2 > 0.0)) throw std::invalid_argument("fit: return series has zero second moment");

    const ParamBounds bounds = options.bounds.value_or(ParamBounds::defaults_for(s2));
    const std::vector<GarchParams> starts = options.starts.empty() ? default_starts(s2) : options.starts;

    // Nelder-Mead runs on u = (omega / s2, alpha, beta) so tolerances are scale-free.
    auto to_params = [s2](const std::array<double, 3>& u) { return GarchParams{u[0] * s2, u[1], u[2]}; };
    auto to_u = [s2](const GarchParams& p) { return std::array<double, 3>{p.omega / s2, p.alpha, p.beta}; };
    auto objective = [&](const std::array<double, 3>& u) { return -eval(to_params(u)); };
    auto project = [&](const std::array<double, 3>& u) { return to_u(bounds.project(to_params(u))); };

    NelderMeadOptions nm;
    nm.ftol = options.ftol;
    nm.xtol = options.xtol;
    nm.max_iter = options.max_iter;

    FitResult best;
    best.loglik = -std::numeric_limits<double>::infinity();
    bool have_best = false;
    int evaluations = 0;
    for (const auto& start : starts) {
        const auto u0 = project(to_u(start));
        std::array<double, 3> step{};
        for (std::size_t i = 0; i < 3; ++i) step[i] = options.initial_step * std::max(std::abs(u0[i]), 0.05);
        const auto r = nelder_mead<3>(objective, project, u0, step, nm);
        evaluations += r.evaluations;
        const double ll = -r.value;
        if (!have_best || ll > best.loglik) {
            have_best = true;
            best.theta_hat = to_params(r.x);
            best.loglik = ll;
            best.iterations = r.iterations;
            best.converged = r.converged && std::isfinite(ll);
        }
    }
    best.evaluations = evaluations;

    best.filter_at_opt = Garch11{}.filter(best.theta_hat, filter_returns, options.init);
    best.residuals.resize(data.size());
    for (std::size_t t = 0; t < data.size(); ++t) {
        best.residuals[t] = data[t] / std::sqrt(best.filter_at_opt.sigma2[t]);
    }
    return best;
}

FitResult fit(std::span<const double> returns, const QmleOptions& options) {
    return fit_fixed_design(returns, returns, options);
}

}  // namespace esboot
