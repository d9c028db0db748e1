#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: plain loops, adaptive Simpson quadrature and bisection.

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Unscaled Student-t density with nu degrees of freedom.
inline double t_pdf(double y, double nu) {
    const double c = std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) / std::sqrt(nu * std::numbers::pi);
    return c * std::pow(1.0 + y * y / nu, -0.5 * (nu + 1.0));
}

/// Density of the unit-variance t: (1/s) t_nu(x/s), s = sqrt((nu-2)/nu).
inline double scaled_t_pdf(double x, double nu) {
    const double s = std::sqrt((nu - 2.0) / nu);
    return t_pdf(x / s, nu) / s;
}

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// Integral of g(x) pdf(x) over (-inf, upper], upper < 0, via x = upper / u.
inline double lower_tail_integral(const std::function<double(double)>& g, const std::function<double(double)>& pdf,
                                  double upper) {
    auto h = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double x = upper / u;
        return g(x) * pdf(x) * (-upper) / (u * u);
    };
    // split so the adaptive rule sees the bulk near u = 1
    return simpson(h, 0.0, 0.25) + simpson(h, 0.25, 1.0);
}

/// Root of a nondecreasing function by bisection on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double target, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double normal_quantile(double p) { return bisect(normal_cdf, p, -40.0, 40.0); }

inline double scaled_t_cdf(double x, double nu) {
    auto pdf = [nu](double v) { return scaled_t_pdf(v, nu); };
    auto one = [](double) { return 1.0; };
    if (x < 0.0) return lower_tail_integral(one, pdf, x);
    return 0.5 + simpson(pdf, 0.0, x);
}

inline double scaled_t_quantile(double p, double nu) {
    return bisect([nu](double x) { return scaled_t_cdf(x, nu); }, p, -60.0, -1e-9);
}

struct Tail {
    double xi, mu, p, q;
};

/// (xi, mu, p, q) by direct quadrature for a lower-tail level alpha < 0.5.
inline Tail tail(const std::function<double(double)>& pdf, double xi, double alpha) {
    const double m1 = lower_tail_integral([](double x) { return x; }, pdf, xi);
    const double m2 = lower_tail_integral([](double x) { return x * x; }, pdf, xi);
    const double m3 = lower_tail_integral([](double x) { return x * x * x; }, pdf, xi);
    return {xi, -m1 / alpha, m2 - alpha, m3};
}

/// GARCH(1,1) variance filter with a given starting value, written as plainly as possible.
inline std::vector<double> garch_filter(double omega, double alpha, double beta, std::span<const double> eps,
                                        double sigma2_1) {
    std::vector<double> s(eps.size() + 1);
    s[0] = sigma2_1;
    for (std::size_t t = 0; t < eps.size(); ++t) s[t + 1] = omega + alpha * eps[t] * eps[t] + beta * s[t];
    return s;
}

inline double mean_of_squares(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s / static_cast<double>(x.size());
}

/// Gaussian quasi-log-likelihood with the presample start (omega + alpha s2)/(1 - beta).
inline double qll(double omega, double alpha, double beta, std::span<const double> eps) {
    const double s2 = mean_of_squares(eps);
    const auto sig = garch_filter(omega, alpha, beta, eps, (omega + alpha * s2) / (1.0 - beta));
    double acc = 0.0;
    for (std::size_t t = 0; t < eps.size(); ++t) acc += -0.5 * eps[t] * eps[t] / sig[t] - 0.5 * std::log(sig[t]);
    return acc / static_cast<double>(eps.size());
}

}  // namespace oracle
