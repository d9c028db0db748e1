#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace esboot {

template <std::size_t N>
struct NelderMeadResult {
    std::array<double, N> x{};
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

struct NelderMeadOptions {
    double ftol = 1e-10;  ///< spread of objective values over the simplex
    double xtol = 1e-8;   ///< max coordinate distance of any vertex from the best one
    int max_iter = 2000;
};

/// Minimizes `f` by the Nelder-Mead simplex method (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Every trial point is passed through
/// `project` before evaluation, so the simplex never leaves the feasible set.
/// Converged when both tolerances hold.
template <std::size_t N, typename F, typename Project>
NelderMeadResult<N> nelder_mead(F&& f, Project&& project, std::array<double, N> start,
                                const std::array<double, N>& step, const NelderMeadOptions& opt) {
    using Point = std::array<double, N>;
    constexpr std::size_t V = N + 1;

    std::array<Point, V> pts;
    std::array<double, V> val;
    NelderMeadResult<N> res;

    auto eval = [&](Point& p) {
        p = project(p);
        ++res.evaluations;
        return f(p);
    };

    pts[0] = start;
    val[0] = eval(pts[0]);
    for (std::size_t i = 0; i < N; ++i) {
        pts[i + 1] = pts[0];
        pts[i + 1][i] += step[i];
        val[i + 1] = eval(pts[i + 1]);
        // A step that projected back onto the start would flatten the simplex.
        if (pts[i + 1][i] == pts[0][i]) {
            pts[i + 1][i] -= step[i];
            val[i + 1] = eval(pts[i + 1]);
        }
    }

    std::array<std::size_t, V> order;
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        std::array<Point, V> p2;
        std::array<double, V> v2;
        for (std::size_t i = 0; i < V; ++i) {
            p2[i] = pts[order[i]];
            v2[i] = val[order[i]];
        }
        pts = p2;
        val = v2;
    };

    auto combine = [](const Point& a, const Point& b, double t) {
        // a + t (b - a)
        Point r;
        for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + t * (b[i] - a[i]);
        return r;
    };

    sort_simplex();
    while (true) {
        const bool flat = std::isfinite(val[N]) ? (val[N] - val[0] <= opt.ftol) : false;
        double size = 0.0;
        for (std::size_t v = 1; v < V; ++v)
            for (std::size_t i = 0; i < N; ++i) size = std::max(size, std::abs(pts[v][i] - pts[0][i]));
        if (flat && size <= opt.xtol) {
            res.converged = true;
            break;
        }
        if (res.iterations >= opt.max_iter) break;
        ++res.iterations;

        Point centroid{};
        for (std::size_t v = 0; v < N; ++v)
            for (std::size_t i = 0; i < N; ++i) centroid[i] += pts[v][i] / static_cast<double>(N);

        Point xr = combine(centroid, pts[N], -1.0);
        const double fr = eval(xr);
        if (fr < val[0]) {
            Point xe = combine(centroid, pts[N], -2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[N] = xe;
                val[N] = fe;
            } else {
                pts[N] = xr;
                val[N] = fr;
            }
        } else if (fr < val[N - 1]) {
            pts[N] = xr;
            val[N] = fr;
        } else {
            const bool outside = fr < val[N];
            Point xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, pts[N], 0.5);
            const double fc = eval(xc);
            if (fc < (outside ? fr : val[N])) {
                pts[N] = xc;
                val[N] = fc;
            } else {
                for (std::size_t v = 1; v < V; ++v) {
                    pts[v] = combine(pts[0], pts[v], 0.5);
                    val[v] = eval(pts[v]);
                }
            }
        }
        sort_simplex();
    }
    res.x = pts[0];
    res.value = val[0];
    return res;
}

}  // namespace esboot
