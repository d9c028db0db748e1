#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "esboot/experiments.hpp"
#include "support/oracles.hpp"

using namespace esboot;

namespace {

Scenario small(std::size_t S = 12) {
    return make_scenario(Persistence::High, InnovationDist::student_t(6), 0.05, 300, 0.10, 100, S, 4242);
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("study designs") {
    const auto hi = study_theta0(Persistence::High);
    const auto lo = study_theta0(Persistence::Low);
    CHECK(hi.omega == doctest::Approx(0.079365).epsilon(1e-5));
    CHECK(hi.alpha == 0.15);
    CHECK(hi.beta == 0.8);
    CHECK(lo.omega == hi.omega);
    CHECK(lo.alpha == 0.4);
    CHECK(lo.beta == 0.55);
    const auto s = make_scenario(Persistence::Low, InnovationDist::normal(), 0.01, 1000, 0.1, 500, 500, 1);
    CHECK(s.id == "low_normal_a0.01_n1000_g0.1");
}

TEST_CASE("scenario validation") {
    auto s = small();
    CHECK_NOTHROW(s.validate());
    auto bad = s;
    bad.theta0 = {0.1, 0.5, 0.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.B = 50;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.n = 40;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.gamma = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("classification") {
    CHECK(classify(Interval::from_bounds(0, 10), 5) == Position::Inside);
    CHECK(classify(Interval::from_bounds(0, 1), 5) == Position::Above);
    CHECK(classify(Interval::from_bounds(6, 7), 5) == Position::Below);
    CHECK(classify(Interval::from_bounds(5, 7), 5) == Position::Inside);
    CHECK(interval_name(IntervalKind::EP) == "EP");
    CHECK(interval_name(IntervalKind::AS) == "AS");
}

TEST_CASE("trajectory pipeline") {
    const auto sc = small();
    const auto r = run_trajectory(sc, 3);
    REQUIRE_FALSE(r.excluded);
    CHECK(r.index == 3);

    RngStream rng = RngStream::derive(sc.master_seed, StreamTag::Trajectory, 3);
    const auto path = Garch11{}.simulate(sc.theta0, sc.dist, sc.n, sc.burn_in, rng);
    const double xi = oracle::scaled_t_quantile(0.05, 6.0);
    const double mu = oracle::tail([](double x) { return oracle::scaled_t_pdf(x, 6.0); }, xi, 0.05).mu;
    CHECK(r.true_es == doctest::Approx(mu * std::sqrt(path.sigma2_true.back())).epsilon(1e-9));

    const auto f = fit(path.returns);
    const auto es = conditional_es(f, sc.alpha);
    CHECK(r.es_hat == es.es_hat);
    CHECK(r.theta_hat == f.theta_hat);
    for (IntervalKind k : kIntervalKinds) {
        const auto i = static_cast<std::size_t>(k);
        CHECK(r.positions[i] == classify(r.intervals[i], r.true_es));
    }
    CHECK(r.intervals[0].length() == r.intervals[1].length());
    CHECK(run_trajectory(sc, 3).es_hat == r.es_hat);
}

TEST_CASE("summaries partition and are reproducible across worker counts") {
    const auto sc = small(16);
    const auto a = run_study(sc, 1);
    const auto b = run_study(sc, 3);
    CHECK(a.summary.included + a.summary.excluded == sc.S);
    for (IntervalKind k : kIntervalKinds) {
        const auto& x = a.summary[k];
        const auto& y = b.summary[k];
        CHECK(x.inside + x.below + x.above == a.summary.included);
        CHECK(std::abs(x.coverage_pct + x.below_pct + x.above_pct - 100.0) < 1e-12);
        CHECK(x.coverage_pct == y.coverage_pct);
        CHECK(x.below_pct == y.below_pct);
        CHECK(x.avg_length == y.avg_length);
    }
    CHECK(a.summary[IntervalKind::EP].avg_length == a.summary[IntervalKind::RT].avg_length);
    for (std::size_t i = 0; i < sc.S; ++i) {
        CHECK(a.records[i].es_hat == b.records[i].es_hat);
        CHECK(a.records[i].intervals[0].lo == b.records[i].intervals[0].lo);
    }
}

TEST_CASE("summarize counts exclusions") {
    const auto sc = small();
    std::vector<TrajectoryRecord> recs(4);
    recs[0].positions.fill(Position::Inside);
    recs[1].positions.fill(Position::Below);
    recs[2].positions.fill(Position::Above);
    recs[3].excluded = true;
    for (auto& r : recs) r.intervals.fill(Interval::from_bounds(0.0, 1.5));
    const auto s = summarize(sc, recs);
    CHECK(s.included == 3);
    CHECK(s.excluded == 1);
    CHECK(s[IntervalKind::SY].coverage_pct == doctest::Approx(100.0 / 3.0));
    CHECK(s[IntervalKind::SY].avg_length == 1.5);
}

TEST_CASE("study csv layout") {
    auto sc = small();
    std::vector<TrajectoryRecord> recs(2);
    for (auto& r : recs) r.intervals.fill(Interval::from_bounds(0.1, 0.3));
    std::vector<StudySummary> sums{summarize(sc, recs)};
    std::ostringstream os;
    write_study_csv(os, sums);
    const auto l = lines(os.str());
    REQUIRE(l.size() == 4);
    CHECK(l[0] == "scenario_id,n,interval_type,avg_coverage_pct,below_pct,above_pct,avg_length,excluded_count");
    CHECK(l[1].rfind(sc.id + ",300,EP,100,0,0,0.19999999999999998,0", 0) == 0);
    CHECK(l[2].find(",RT,") != std::string::npos);
    CHECK(l[3].find(",SY,") != std::string::npos);
    std::ostringstream with_as;
    write_study_csv(with_as, sums, true);
    CHECK(lines(with_as.str()).size() == 5);
}

TEST_CASE("density comparison") {
    auto sc = make_scenario(Persistence::High, InnovationDist::student_t(6), 0.05, 400, 0.10, 100, 40, 7);
    const auto d = density_comparison(sc, 256, 0);
    CHECK(d.sampling_draws.size() + d.excluded == 40);
    CHECK(d.bootstrap_draws.size() <= 100);
    CHECK(d.bootstrap_draws.size() >= 95);
    CHECK(d.sampling.x == d.bootstrap.x);
    CHECK(d.sampling.x.size() == 256);
    CHECK(std::abs(trapezoid(d.sampling.x, d.sampling.density) - 1.0) < 1e-3);
    CHECK(std::abs(trapezoid(d.bootstrap.x, d.bootstrap.density) - 1.0) < 1e-3);
    CHECK(d.ks_distance == ks_two_sample(d.sampling_draws, d.bootstrap_draws));

    std::ostringstream os;
    write_curve_csv(os, d.sampling);
    const auto l = lines(os.str());
    CHECK(l.size() == 257);
    CHECK(l[0] == "x,density");
}
