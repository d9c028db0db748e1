#include "esboot/volatility.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace esboot {

bool GarchParams::is_positive() const noexcept {
    return std::isfinite(omega) && std::isfinite(alpha) && std::isfinite(beta) && omega > 0.0 &&
           alpha >= 0.0 && beta >= 0.0;
}

double GarchParams::unconditional_variance() const {
    if (!(persistence() < 1.0)) throw std::domain_error("unconditional variance needs alpha + beta < 1");
    return omega / (1.0 - alpha - beta);
}

double second_moment(std::span<const double> x) noexcept {
    double s = 0.0;
    for (double v : x) s += v * v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

std::pair<double, Gradient> Garch11::initial_value(const GarchParams& p, double s2, InitScheme init) {
    switch (init.kind) {
        case InitScheme::Kind::Presample: {
            const double denom = 1.0 - p.beta;
            const double v = (p.omega + p.alpha * s2) / denom;
            return {v, Gradient{1.0 / denom, s2 / denom, v / denom}};
        }
        case InitScheme::Kind::SampleMoment:
            return {s2, Gradient{0.0, 0.0, 0.0}};
        case InitScheme::Kind::Fixed:
            return {init.value, Gradient{0.0, 0.0, 0.0}};
    }
    return {s2, Gradient{}};
}

FilterOutput Garch11::filter(const GarchParams& p, std::span<const double> returns, InitScheme init) const {
    if (returns.empty()) throw std::invalid_argument("filter: empty return series");
    for (double r : returns) {
        if (!std::isfinite(r)) throw std::invalid_argument("filter: non-finite return");
    }
    const std::size_t n = returns.size();
    FilterOutput out;
    out.sigma2.resize(n + 1);
    out.dsigma2.resize(n + 1);
    out.D.resize(n + 1);

    auto [s2_1, g_1] = initial_value(p, second_moment(returns), init);
    out.sigma2[0] = s2_1;
    out.dsigma2[0] = g_1;
    for (std::size_t t = 0; t < n; ++t) {
        const double e2 = returns[t] * returns[t];
        const double prev = out.sigma2[t];
        const Gradient& g = out.dsigma2[t];
        out.sigma2[t + 1] = p.omega + p.alpha * e2 + p.beta * prev;
        out.dsigma2[t + 1] = {1.0 + p.beta * g[0], e2 + p.beta * g[1], prev + p.beta * g[2]};
    }
    for (std::size_t t = 0; t <= n; ++t) {
        const double h = 2.0 * out.sigma2[t];
        out.D[t] = {out.dsigma2[t][0] / h, out.dsigma2[t][1] / h, out.dsigma2[t][2] / h};
    }
    return out;
}

void Garch11::filter_variance(const GarchParams& p, std::span<const double> returns, InitScheme init,
                              std::span<double> out) const {
    const std::size_t n = returns.size();
    double s2 = 0.0;
    if (init.kind != InitScheme::Kind::Fixed) s2 = second_moment(returns);
    double h = initial_value(p, s2, init).first;
    out[0] = h;
    for (std::size_t t = 0; t < n; ++t) {
        const double e2 = returns[t] * returns[t];
        h = p.omega + p.alpha * e2 + p.beta * h;
        out[t + 1] = h;
    }
}

SimulatedPath Garch11::simulate(const GarchParams& p, const InnovationDist& dist, std::size_t n,
                                std::size_t burn_in, RngStream& rng) const {
    if (n == 0) throw std::invalid_argument("simulate: n must be at least 1");
    if (!p.is_positive()) throw std::invalid_argument("simulate: need omega > 0, alpha >= 0, beta >= 0");
    if (!(p.persistence() < 1.0)) {
        throw std::invalid_argument("simulate: stationarity requires alpha + beta < 1");
    }
    SimulatedPath path;
    path.returns.resize(n);
    path.sigma2_true.resize(n + 1);

    double h = p.unconditional_variance();
    for (std::size_t t = 0; t < burn_in; ++t) {
        const double e = std::sqrt(h) * dist.draw(rng);
        h = p.omega + p.alpha * e * e + p.beta * h;
    }
    for (std::size_t t = 0; t < n; ++t) {
        path.sigma2_true[t] = h;
        const double e = std::sqrt(h) * dist.draw(rng);
        path.returns[t] = e;
        h = p.omega + p.alpha * e * e + p.beta * h;
    }
    path.sigma2_true[n] = h;
    return path;
}

GarchParams Garch11::scale_params(const GarchParams& p, double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale_params: lambda must be positive");
    const double l2 = lambda * lambda;
    return {l2 * p.omega, l2 * p.alpha, p.beta};
}

}  // namespace esboot
