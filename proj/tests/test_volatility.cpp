#include <doctest.h>

#include <cmath>
#include <vector>

#include "esboot/volatility.hpp"
#include "support/oracles.hpp"

using namespace esboot;

namespace {

const GarchParams kHigh{0.05 * 400.0 / 252.0, 0.15, 0.8};

std::vector<double> random_path(std::uint64_t seed, std::size_t n, const GarchParams& p = kHigh) {
    RngStream r(seed);
    return Garch11{}.simulate(p, InnovationDist::student_t(6), n, 200, r).returns;
}

GarchParams random_params(RngStream& r) {
    const double a = 0.02 + 0.4 * r.uniform_open();
    const double b = (0.97 - a) * r.uniform_open();
    return {0.01 + 2.0 * r.uniform_open(), a, b};
}

}  // namespace

TEST_CASE("one-step recursion and degenerate constant volatility") {
    Garch11 g;
    const std::vector<double> one{1.0};
    const auto out = g.filter({0.1, 0.15, 0.8}, one, InitScheme::fixed(1.0));
    REQUIRE(out.size() == 2);
    CHECK(out.sigma2[1] == doctest::Approx(1.05).epsilon(1e-15));

    const auto x = random_path(1, 50);
    const auto flat = g.filter({0.1, 0.0, 0.0}, x, InitScheme::fixed(0.1));
    for (double s : flat.sigma2) CHECK(s == 0.1);
}

TEST_CASE("filter matches a plain recursion for each initial scheme") {
    Garch11 g;
    const auto x = random_path(2, 300);
    const GarchParams p{0.2, 0.1, 0.85};
    const double s2 = oracle::mean_of_squares(x);

    const auto pre = g.filter(p, x);
    const auto ref_pre = oracle::garch_filter(p.omega, p.alpha, p.beta, x, (p.omega + p.alpha * s2) / (1.0 - p.beta));
    const auto mom = g.filter(p, x, InitScheme::sample_moment());
    const auto ref_mom = oracle::garch_filter(p.omega, p.alpha, p.beta, x, s2);
    const auto fix = g.filter(p, x, InitScheme::fixed(3.0));
    const auto ref_fix = oracle::garch_filter(p.omega, p.alpha, p.beta, x, 3.0);
    REQUIRE(pre.size() == x.size() + 1);
    for (std::size_t t = 0; t <= x.size(); ++t) {
        CHECK(pre.sigma2[t] == doctest::Approx(ref_pre[t]).epsilon(1e-14));
        CHECK(mom.sigma2[t] == doctest::Approx(ref_mom[t]).epsilon(1e-14));
        CHECK(fix.sigma2[t] == doctest::Approx(ref_fix[t]).epsilon(1e-14));
    }

    std::vector<double> out(x.size() + 1);
    g.filter_variance(p, x, InitScheme::presample(), out);
    CHECK(out == pre.sigma2);
}

TEST_CASE("D is dsigma2 / (2 sigma2) and sigma2 >= omega") {
    Garch11 g;
    RngStream r(3);
    for (int k = 0; k < 20; ++k) {
        const auto p = random_params(r);
        const auto x = random_path(100 + k, 200);
        const auto f = g.filter(p, x);
        for (std::size_t t = 0; t < f.size(); ++t) {
            CHECK(f.sigma2[t] >= p.omega);
            for (int j = 0; j < 3; ++j) CHECK(f.D[t][j] == f.dsigma2[t][j] / (2.0 * f.sigma2[t]));
        }
    }
}

TEST_CASE("fixed initial value has zero derivative") {
    const auto x = random_path(4, 10);
    const auto f = Garch11{}.filter(kHigh, x, InitScheme::fixed(2.0));
    for (double d : f.dsigma2[0]) CHECK(d == 0.0);
    CHECK(f.dsigma2[1][0] == 1.0);
    CHECK(f.dsigma2[1][1] == x[0] * x[0]);
    CHECK(f.dsigma2[1][2] == 2.0);
}

TEST_CASE("analytic derivatives match central finite differences") {
    Garch11 g;
    auto check_path = [&](const GarchParams& p, const std::vector<double>& x, InitScheme init) {
        const auto f = g.filter(p, x, init);
        const auto base = p.to_array();
        double worst = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double h = 1e-6 * std::max(std::abs(base[j]), 1e-3);
            auto up = base, dn = base;
            up[j] += h;
            dn[j] -= h;
            const auto fu = g.filter(GarchParams::from_array(up), x, init);
            const auto fd = g.filter(GarchParams::from_array(dn), x, init);
            for (std::size_t t = 0; t < f.size(); ++t) {
                const double fdv = (fu.sigma2[t] - fd.sigma2[t]) / (2.0 * h);
                const double scale = std::max(std::abs(f.dsigma2[t][j]), 1e-3 * f.sigma2[t]);
                worst = std::max(worst, std::abs(fdv - f.dsigma2[t][j]) / scale);
            }
        }
        return worst;
    };

    CHECK(check_path(kHigh, random_path(5, 1000), InitScheme::presample()) < 1e-5);
    CHECK(check_path(kHigh, random_path(5, 1000), InitScheme::sample_moment()) < 1e-5);

    RngStream r(6);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto p = random_params(r);
        worst = std::max(worst, check_path(p, random_path(1000 + k, 300, kHigh), InitScheme::presample()));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("scale_params") {
    Garch11 g;
    const GarchParams p{0.1, 0.15, 0.8};
    CHECK(g.scale_params(p, 1.0) == p);
    const auto s = g.scale_params(p, 2.0);
    CHECK(s.omega == doctest::Approx(0.4));
    CHECK(s.alpha == doctest::Approx(0.6));
    CHECK(s.beta == 0.8);
}

TEST_CASE("scaling identity is exact to roundoff") {
    Garch11 g;
    RngStream r(7);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto p = random_params(r);
        const double lambda = 0.2 + 5.0 * r.uniform_open();
        const auto x = random_path(2000 + k, 400);
        const auto a = g.filter(p, x);
        const auto b = g.filter(g.scale_params(p, lambda), x);
        const auto c = g.filter(p, x, InitScheme::fixed(1.7));
        const auto d = g.filter(g.scale_params(p, lambda), x, InitScheme::fixed(1.7 * lambda * lambda));
        for (std::size_t t = 0; t < a.size(); ++t) {
            worst = std::max(worst, std::abs(b.sigma2[t] / (lambda * lambda * a.sigma2[t]) - 1.0));
            worst = std::max(worst, std::abs(d.sigma2[t] / (lambda * lambda * c.sigma2[t]) - 1.0));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("scaling the data scales the filter under the presample start") {
    Garch11 g;
    const auto x = random_path(8, 500);
    const double c = 3.0;
    std::vector<double> y(x);
    for (double& v : y) v *= c;
    const GarchParams p{0.3, 0.12, 0.83};
    const auto a = g.filter(p, x);
    const auto b = g.filter({c * c * p.omega, p.alpha, p.beta}, y);
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(b.sigma2[t] == doctest::Approx(c * c * a.sigma2[t]).epsilon(1e-13));
}

TEST_CASE("monotone in theta given the same initial value") {
    Garch11 g;
    RngStream r(9);
    for (int k = 0; k < 50; ++k) {
        const auto p1 = random_params(r);
        GarchParams p2{p1.omega * (1.0 + r.uniform_open()), p1.alpha + 0.01 * r.uniform_open(),
                       p1.beta + 0.01 * r.uniform_open()};
        const auto x = random_path(3000 + k, 200);
        const auto a = g.filter(p1, x, InitScheme::fixed(1.0));
        const auto b = g.filter(p2, x, InitScheme::fixed(1.0));
        for (std::size_t t = 0; t < a.size(); ++t) CHECK(a.sigma2[t] <= b.sigma2[t]);
    }
}

TEST_CASE("filter rejects bad input") {
    Garch11 g;
    CHECK_THROWS_AS(g.filter(kHigh, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(g.filter(kHigh, std::vector<double>{1.0, NAN}), std::invalid_argument);
    CHECK_THROWS_AS(g.filter(kHigh, std::vector<double>{1.0, INFINITY}), std::invalid_argument);
}

TEST_CASE("simulate") {
    Garch11 g;
    CHECK(kHigh.unconditional_variance() == doctest::Approx(1.5873).epsilon(1e-4));
    RngStream r0(10);
    CHECK_THROWS_AS(g.simulate({0.1, 0.5, 0.5}, InnovationDist::normal(), 10, 0, r0), std::invalid_argument);

    SUBCASE("start at the unconditional variance") {
        RngStream r(11);
        const auto path = g.simulate(kHigh, InnovationDist::normal(), 5, 0, r);
        CHECK(std::abs(path.sigma2_true[0] - 1.5873) < 1e-4);
        REQUIRE(path.returns.size() == 5);
        REQUIRE(path.sigma2_true.size() == 6);
        for (std::size_t t = 0; t < 5; ++t) {
            const double next = kHigh.omega + kHigh.alpha * path.returns[t] * path.returns[t] + kHigh.beta * path.sigma2_true[t];
            CHECK(path.sigma2_true[t + 1] == doctest::Approx(next).epsilon(1e-15));
        }
    }
    SUBCASE("iid degenerate case") {
        RngStream r(12);
        const auto path = g.simulate({0.7, 0.0, 0.0}, InnovationDist::normal(), 1000000, 0, r);
        CHECK(std::abs(oracle::mean_of_squares(path.returns) / 0.7 - 1.0) < 0.01);
    }
    SUBCASE("long path has the unconditional variance") {
        RngStream r(13);
        const auto path = g.simulate(kHigh, InnovationDist::normal(), 1000000, 1000, r);
        CHECK(std::abs(oracle::mean_of_squares(path.returns) / kHigh.unconditional_variance() - 1.0) < 0.02);
    }
    SUBCASE("reproducible") {
        RngStream a(14), b(14);
        const auto pa = g.simulate(kHigh, InnovationDist::student_t(6), 100, 50, a);
        const auto pb = g.simulate(kHigh, InnovationDist::student_t(6), 100, 50, b);
        CHECK(pa.returns == pb.returns);
        CHECK(pa.sigma2_true == pb.sigma2_true);
    }
}
