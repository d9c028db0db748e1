#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "esboot/rng.hpp"

using namespace esboot;

TEST_CASE("derive_seed follows the documented mixing") {
    const std::uint64_t m = 12345;
    const auto tag = static_cast<std::uint64_t>(StreamTag::Bootstrap);
    CHECK(derive_seed(m, StreamTag::Bootstrap, 7) == mix64(mix64(mix64(m) ^ tag) + 7));
    CHECK(derive_seed(m, StreamTag::Bootstrap, 7) != derive_seed(m, StreamTag::Trajectory, 7));
    CHECK(derive_seed(m, StreamTag::Bootstrap, 7) != derive_seed(m, StreamTag::Bootstrap, 8));
}

TEST_CASE("streams are reproducible") {
    RngStream a(99), b(99);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("uniform_open stays strictly inside (0, 1)") {
    RngStream r(1);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform_open();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("below is uniform over its range") {
    RngStream r(5);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) ++counts[r.below(7)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
    CHECK_THROWS_AS(r.below(0), std::invalid_argument);
}

TEST_CASE("derived streams do not collide") {
    std::set<std::uint64_t> first;
    for (std::uint64_t b = 0; b < 1000; ++b) first.insert(RngStream::derive(3, StreamTag::Bootstrap, b).next());
    CHECK(first.size() == 1000);
}
