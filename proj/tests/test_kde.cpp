#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "esboot/distributions.hpp"
#include "esboot/kde.hpp"
#include "support/oracles.hpp"

using namespace esboot;

TEST_CASE("silverman bandwidth") {
    std::vector<double> v;
    for (int i = 0; i < 100; ++i) v.push_back(i % 2 ? 1.0 : -1.0);
    // sample sd with m-1 in the denominator
    const double sd = std::sqrt(100.0 / 99.0);
    CHECK(silverman_bandwidth(v) == doctest::Approx(1.06 * sd * std::pow(100.0, -0.2)));
}

TEST_CASE("repeated value with a forced bandwidth gives the kernel") {
    const std::vector<double> v(50, 0.7);
    const auto grid = linear_grid(-3.0, 4.0, 701);
    const double h = 0.4;
    const auto c = kde(v, grid, h);
    CHECK(c.bandwidth == h);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(c.density[i] == doctest::Approx(oracle::normal_pdf((grid[i] - 0.7) / h) / h).epsilon(1e-12));
    CHECK_THROWS_AS(kde(v, grid), std::invalid_argument);
    CHECK_THROWS_AS(kde(std::vector<double>(29, 1.0), grid, 0.1), std::invalid_argument);
}

TEST_CASE("normal sample recovers the normal density and integrates to one") {
    RngStream r(1);
    const auto z = InnovationDist::normal().sample(100000, r);
    const auto grid = linear_grid(-6.0, 6.0, 1201);
    const auto c = kde(z, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(c.density[i] - oracle::normal_pdf(grid[i])));
    CHECK(worst < 0.02);
    CHECK(std::abs(trapezoid(c.x, c.density) - 1.0) < 1e-3);
    const auto top = std::max_element(c.density.begin(), c.density.end()) - c.density.begin();
    CHECK(std::abs(grid[top]) < 0.1);
}

TEST_CASE("grid, trapezoid, local maxima") {
    const auto g = linear_grid(0.0, 1.0, 11);
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    std::vector<double> y(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) y[i] = 2.0 * g[i];
    CHECK(trapezoid(g, y) == doctest::Approx(1.0));
    CHECK(local_maxima(std::vector<double>{0, 1, 0, 2, 0}) == std::vector<std::size_t>{1, 3});
    CHECK(local_maxima(std::vector<double>{0, 1, 2}).empty());
}

TEST_CASE("Kolmogorov-Smirnov distances") {
    CHECK(ks_two_sample(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) == 0.0);
    CHECK(ks_two_sample(std::vector<double>{1, 2}, std::vector<double>{3, 4}) == 1.0);
    CHECK(ks_two_sample(std::vector<double>{1, 2, 3, 4}, std::vector<double>{3, 4, 5, 6}) == doctest::Approx(0.5));
    RngStream r(2);
    const auto z = InnovationDist::normal().sample(20000, r);
    CHECK(ks_against_normal(z, 1.0) < 0.015);
    CHECK(ks_against_normal(z, 4.0) > 0.1);
}
