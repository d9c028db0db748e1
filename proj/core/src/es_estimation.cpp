#include "esboot/es_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

namespace esboot {

std::size_t tail_count_for(double alpha, std::size_t n) {
    const double an = alpha * static_cast<double>(n);
    return static_cast<std::size_t>(std::floor(an * (1.0 + 1e-12))) + 1;
}

std::size_t ceil_rank(double p, std::size_t m) {
    const double pm = p * static_cast<double>(m);
    const auto r = static_cast<std::size_t>(std::max(0.0, std::ceil(pm * (1.0 - 1e-12))));
    return std::clamp<std::size_t>(r, 1, m);
}

TailSelection empirical_quantile(std::span<const double> values, double alpha) {
    const std::size_t n = values.size();
    if (n == 0) throw std::invalid_argument("empirical_quantile: empty input");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("empirical_quantile: alpha must lie in (0, 1)");
    if (alpha * static_cast<double>(n) * (1.0 + 1e-12) < 1.0) {
        throw std::invalid_argument("empirical_quantile: alpha * n must be at least 1");
    }
    const std::size_t k = tail_count_for(alpha, n);
    if (k > n) throw std::invalid_argument("empirical_quantile: tail would exceed the sample");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto before = [&](std::size_t a, std::size_t b) {
        return values[a] < values[b] || (values[a] == values[b] && a < b);
    };
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k - 1), idx.end(), before);
    idx.resize(k);
    std::sort(idx.begin(), idx.end(), before);

    TailSelection sel;
    sel.xi = values[idx.back()];
    sel.index = std::move(idx);
    return sel;
}

MuEstimate estimate_mu(std::span<const double> residuals, double alpha) {
    const TailSelection sel = empirical_quantile(residuals, alpha);
    double sum = 0.0;
    for (std::size_t i : sel.index) sum += residuals[i];
    MuEstimate m;
    m.xi_hat = sel.xi;
    m.tail_count = sel.index.size();
    m.mu_hat = -sum / static_cast<double>(m.tail_count);
    return m;
}

EsEstimate conditional_es(const FitResult& fit, double alpha) {
    if (!fit.converged) throw std::invalid_argument("conditional_es: QML fit did not converge");
    const MuEstimate m = estimate_mu(fit.residuals, alpha);
    EsEstimate es;
    es.alpha = alpha;
    es.xi_hat = m.xi_hat;
    es.mu_hat = m.mu_hat;
    es.tail_count = m.tail_count;
    es.sigma_next = std::sqrt(fit.sigma2_next());
    es.es_hat = es.mu_hat * es.sigma_next;
    return es;
}

MuVariance mu_variance(const TailQuantities& tq) {
    const double a = tq.alpha;
    const double xi = tq.xi;
    const double mu = tq.mu;
    const double k4 = (tq.kappa - 1.0) / 4.0;

    MuVariance mv;
    mv.tail_variance = tq.p + a + xi * (1.0 - a) * a * (xi + 2.0 * mu) - (a * mu) * (a * mu);
    mv.tail_covariance = a * mu - (xi * tq.p - tq.q);
    mv.sigma2_alpha = mv.tail_variance / (a * a);
    mv.x_alpha = -mv.tail_covariance / a;
    mv.phi_alpha = 0.5 * mv.x_alpha - mu * k4;
    mv.nu_alpha = mv.sigma2_alpha - mv.x_alpha * mu + k4 * mu * mu;
    return mv;
}

GammaHat gamma_hat(const FitResult& fit, double alpha) {
    if (!fit.converged) throw std::invalid_argument("gamma_hat: QML fit did not converge");
    const auto& eta = fit.residuals;
    const std::size_t n = eta.size();
    const double dn = static_cast<double>(n);

    const MuEstimate m = estimate_mu(eta, alpha);
    const TailSelection sel = empirical_quantile(eta, alpha);

    GammaHat g;
    g.alpha = alpha;
    g.xi_hat = m.xi_hat;
    g.mu_hat = m.mu_hat;

    double k4 = 0.0;
    for (double e : eta) k4 += e * e * e * e;
    g.kappa_hat = k4 / dn;

    double p2 = 0.0;
    double p3 = 0.0;
    for (std::size_t i : sel.index) {
        const double e2 = eta[i] * eta[i];
        p2 += e2;
        p3 += e2 * eta[i];
    }
    g.p_hat = p2 / dn - alpha;
    g.q_hat = p3 / dn;

    for (std::size_t t = 0; t < n; ++t) {
        const Eigen::Vector3d d(fit.filter_at_opt.D[t][0], fit.filter_at_opt.D[t][1], fit.filter_at_opt.D[t][2]);
        g.Omega_hat += d;
        g.J_hat.noalias() += d * d.transpose();
    }
    g.Omega_hat /= dn;
    g.J_hat /= dn;

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(g.J_hat, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > 1e12) {
        throw SingularInformationError("gamma_hat: J_hat is singular or ill-conditioned");
    }
    g.J_inv = g.J_hat.ldlt().solve(Eigen::Matrix3d::Identity());
    g.J_inv = 0.5 * (g.J_inv + g.J_inv.transpose());

    const MuVariance mv = mu_variance({alpha, g.xi_hat, g.mu_hat, g.p_hat, g.q_hat, g.kappa_hat});
    g.sigma2_alpha_hat = mv.sigma2_alpha;
    g.x_alpha_hat = mv.x_alpha;
    g.phi_alpha_hat = mv.phi_alpha;
    g.nu_alpha_hat = mv.nu_alpha;

    const Eigen::Vector3d cross = g.phi_alpha_hat * (g.J_inv * g.Omega_hat);
    g.Gamma.topLeftCorner<3, 3>() = ((g.kappa_hat - 1.0) / 4.0) * g.J_inv;
    g.Gamma.topRightCorner<3, 1>() = cross;
    g.Gamma.bottomLeftCorner<1, 3>() = cross.transpose();
    g.Gamma(3, 3) = g.nu_alpha_hat;
    return g;
}

AsymptoticInterval asymptotic_interval(const FitResult& fit, const EsEstimate& es, const GammaHat& gh,
                                       double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("asymptotic_interval: gamma must lie in (0, 1)");
    const double sigma2 = fit.sigma2_next();
    const double sigma = std::sqrt(sigma2);
    const auto& ds2 = fit.filter_at_opt.dsigma2.back();

    Eigen::Vector4d v;
    for (int i = 0; i < 3; ++i) v(i) = es.mu_hat * ds2[static_cast<std::size_t>(i)] / (2.0 * sigma);
    v(3) = sigma;

    AsymptoticInterval out;
    out.gamma = gamma;
    double qf = v.dot(gh.Gamma * v);
    if (qf < 0.0) {
        qf = 0.0;
        out.clamped = true;
    }
    out.quadratic_form = qf;
    const double z = std::abs(boost::math::quantile(boost::math::normal_distribution<double>(), gamma / 2.0));
    const double half = z * std::sqrt(qf / static_cast<double>(fit.n()));
    out.interval = Interval{es.es_hat - half, es.es_hat + half, 2.0 * half};
    return out;
}

}  // namespace esboot
