#include "esboot/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace esboot {

double silverman_bandwidth(std::span<const double> values) {
    const std::size_t m = values.size();
    if (m < 2) throw std::invalid_argument("silverman_bandwidth: need at least two values");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));
    return 1.06 * sd * std::pow(static_cast<double>(m), -0.2);
}

KdeCurve kde(std::span<const double> values, std::span<const double> grid, std::optional<double> bandwidth) {
    if (values.size() < 30) throw std::invalid_argument("kde: need at least 30 values");
    const double h = bandwidth.value_or(silverman_bandwidth(values));
    if (!(h > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");

    KdeCurve c;
    c.bandwidth = h;
    c.x.assign(grid.begin(), grid.end());
    c.density.assign(grid.size(), 0.0);
    const double norm = 1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double acc = 0.0;
        for (double v : values) {
            const double z = (grid[g] - v) / h;
            acc += std::exp(-0.5 * z * z);
        }
        c.density[g] = acc * norm;
    }
    return c;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (points < 2 || !(hi > lo)) throw std::invalid_argument("linear_grid: need hi > lo and two points");
    std::vector<double> g(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + step * static_cast<double>(i);
    g.back() = hi;
    return g;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

std::vector<std::size_t> local_maxima(std::span<const double> y) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(i);
    }
    return out;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_against_normal(std::span<const double> a, double variance) {
    if (a.empty()) throw std::invalid_argument("ks_against_normal: empty sample");
    if (!(variance > 0.0)) throw std::invalid_argument("ks_against_normal: variance must be positive");
    std::vector<double> s(a.begin(), a.end());
    std::sort(s.begin(), s.end());
    const boost::math::normal_distribution<double> law(0.0, std::sqrt(variance));
    const double m = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = boost::math::cdf(law, s[i]);
        d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
    }
    return d;
}

}  // namespace esboot
