#include "esboot/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "esboot/parallel.hpp"
#include "esboot/qmle.hpp"

namespace esboot {

namespace {

constexpr double kMaxExclusionRate = 0.05;

void write_number(std::ostream& os, double v) {
    const auto old = os.precision(17);
    os << v;
    os.precision(old);
}

}  // namespace

GarchParams study_theta0(Persistence persistence) {
    const double omega = 0.05 * 20.0 * 20.0 / 252.0;
    return persistence == Persistence::High ? GarchParams{omega, 0.15, 0.8} : GarchParams{omega, 0.4, 0.55};
}

void Scenario::validate() const {
    if (!theta0.is_positive()) throw std::invalid_argument("scenario: theta0 needs omega > 0, alpha >= 0, beta >= 0");
    if (!(theta0.persistence() < 1.0)) throw std::invalid_argument("scenario: theta0 must satisfy alpha0 + beta0 < 1");
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("scenario: alpha must lie in (0, 0.5)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("scenario: gamma must lie in (0, 1)");
    if (n < 50) throw std::invalid_argument("scenario: n must be at least 50");
    if (alpha * static_cast<double>(n) < 1.0) throw std::invalid_argument("scenario: alpha * n must be at least 1");
    if (B < 100) throw std::invalid_argument("scenario: B must be at least 100");
    if (S < 1) throw std::invalid_argument("scenario: S must be at least 1");
}

Scenario make_scenario(Persistence persistence, const InnovationDist& dist, double alpha, std::size_t n,
                       double gamma, std::size_t B, std::size_t S, std::uint64_t master_seed) {
    Scenario s;
    std::ostringstream id;
    id << (persistence == Persistence::High ? "high" : "low") << '_' << dist.name() << "_a" << alpha << "_n" << n
       << "_g" << gamma;
    s.id = id.str();
    s.theta0 = study_theta0(persistence);
    s.dist = dist;
    s.alpha = alpha;
    s.n = n;
    s.gamma = gamma;
    s.B = B;
    s.S = S;
    s.master_seed = master_seed;
    return s;
}

std::string_view interval_name(IntervalKind kind) {
    switch (kind) {
        case IntervalKind::EP: return "EP";
        case IntervalKind::RT: return "RT";
        case IntervalKind::SY: return "SY";
        case IntervalKind::AS: return "AS";
    }
    return "?";
}

Position classify(const Interval& interval, double truth) {
    if (truth < interval.lo) return Position::Below;
    if (truth > interval.hi) return Position::Above;
    return Position::Inside;
}

TrajectoryRecord run_trajectory(const Scenario& sc, std::size_t index) {
    TrajectoryRecord rec;
    rec.index = index;

    RngStream rng = RngStream::derive(sc.master_seed, StreamTag::Trajectory, index);
    SimulatedPath path = Garch11{}.simulate(sc.theta0, sc.dist, sc.n, sc.burn_in, rng);
    const double mu_true = tail_quantities_closed(sc.dist, sc.alpha).mu;
    rec.true_es = mu_true * std::sqrt(path.sigma2_true.back());

    auto exclude = [&](std::string why) {
        rec.excluded = true;
        rec.exclusion_reason = std::move(why);
        return rec;
    };

    FitResult f = fit(path.returns);
    rec.theta_hat = f.theta_hat;
    rec.fit_iterations = f.iterations;
    if (!f.converged) return exclude("qmle did not converge");

    const EsEstimate es = conditional_es(f, sc.alpha);
    rec.es_hat = es.es_hat;
    rec.mu_hat = es.mu_hat;

    try {
        const GammaHat gh = gamma_hat(f, sc.alpha);
        rec.intervals[static_cast<std::size_t>(IntervalKind::AS)] = asymptotic_interval(f, es, gh, sc.gamma).interval;
    } catch (const SingularInformationError& e) {
        return exclude(e.what());
    }

    try {
        const BootstrapContext ctx = BootstrapContext::make(std::move(path.returns), std::move(f), sc.alpha);
        const BootstrapRun run =
            run_bootstrap(ctx, sc.B, derive_seed(sc.master_seed, StreamTag::Bootstrap, index), 1);
        rec.bootstrap_failures = run.failures;
        const IntervalSet iv = bootstrap_intervals(run.replicates, ctx.es_hat, sc.n, sc.gamma);
        rec.intervals[static_cast<std::size_t>(IntervalKind::EP)] = iv.ep;
        rec.intervals[static_cast<std::size_t>(IntervalKind::RT)] = iv.rt;
        rec.intervals[static_cast<std::size_t>(IntervalKind::SY)] = iv.sy;
    } catch (const BootstrapFailure& e) {
        rec.bootstrap_failures = e.failures();
        return exclude(e.what());
    }

    for (IntervalKind k : kIntervalKinds) {
        const auto i = static_cast<std::size_t>(k);
        rec.positions[i] = classify(rec.intervals[i], rec.true_es);
    }
    return rec;
}

StudySummary summarize(const Scenario& scenario, std::span<const TrajectoryRecord> records) {
    StudySummary s;
    s.scenario = scenario;
    std::array<double, 4> length_sum{};
    for (const auto& r : records) {
        if (r.excluded) {
            ++s.excluded;
            continue;
        }
        ++s.included;
        for (std::size_t k = 0; k < 4; ++k) {
            auto& b = s.by_kind[k];
            switch (r.positions[k]) {
                case Position::Inside: ++b.inside; break;
                case Position::Below: ++b.below; break;
                case Position::Above: ++b.above; break;
            }
            length_sum[k] += r.intervals[k].length();
        }
    }
    if (s.included > 0) {
        const double m = static_cast<double>(s.included);
        for (std::size_t k = 0; k < 4; ++k) {
            auto& b = s.by_kind[k];
            b.coverage_pct = 100.0 * static_cast<double>(b.inside) / m;
            b.below_pct = 100.0 * static_cast<double>(b.below) / m;
            b.above_pct = 100.0 * static_cast<double>(b.above) / m;
            b.avg_length = length_sum[k] / m;
        }
    }
    return s;
}

StudyResult run_study(const Scenario& scenario, std::size_t workers,
                      const std::function<void(std::size_t)>& on_trajectory_done) {
    scenario.validate();
    StudyResult out;
    out.records.resize(scenario.S);
    std::atomic<std::size_t> done{0};
    parallel_for(scenario.S, workers, [&](std::size_t i) {
        out.records[i] = run_trajectory(scenario, i);
        const std::size_t d = ++done;
        if (on_trajectory_done) on_trajectory_done(d);
    });
    out.summary = summarize(scenario, out.records);
    if (static_cast<double>(out.summary.excluded) > kMaxExclusionRate * static_cast<double>(scenario.S)) {
        std::ostringstream os;
        os << "study " << scenario.id << ": " << out.summary.excluded << " of " << scenario.S
           << " trajectories excluded (limit 5%)";
        throw StudyAborted(os.str(), out.summary.excluded);
    }
    return out;
}

void write_study_csv(std::ostream& os, std::span<const StudySummary> summaries, bool include_asymptotic) {
    os << "scenario_id,n,interval_type,avg_coverage_pct,below_pct,above_pct,avg_length,excluded_count\n";
    for (const auto& s : summaries) {
        for (IntervalKind k : kIntervalKinds) {
            if (k == IntervalKind::AS && !include_asymptotic) continue;
            const auto& b = s[k];
            os << s.scenario.id << ',' << s.scenario.n << ',' << interval_name(k) << ',';
            write_number(os, b.coverage_pct);
            os << ',';
            write_number(os, b.below_pct);
            os << ',';
            write_number(os, b.above_pct);
            os << ',';
            write_number(os, b.avg_length);
            os << ',' << s.excluded << '\n';
        }
    }
}

DensityComparison density_comparison(const Scenario& sc, std::size_t n_grid, std::size_t workers) {
    sc.validate();
    const double root_n = std::sqrt(static_cast<double>(sc.n));
    const double mu_true = tail_quantities_closed(sc.dist, sc.alpha).mu;

    std::vector<double> draws(sc.S, std::numeric_limits<double>::quiet_NaN());
    parallel_for(sc.S, workers, [&](std::size_t i) {
        RngStream rng = RngStream::derive(sc.master_seed, StreamTag::Trajectory, i);
        const SimulatedPath path = Garch11{}.simulate(sc.theta0, sc.dist, sc.n, sc.burn_in, rng);
        const FitResult f = fit(path.returns);
        if (f.converged) draws[i] = root_n * (estimate_mu(f.residuals, sc.alpha).mu_hat - mu_true);
    });

    DensityComparison out;
    for (double d : draws) {
        if (std::isnan(d)) {
            ++out.excluded;
        } else {
            out.sampling_draws.push_back(d);
        }
    }

    RngStream rng = RngStream::derive(sc.master_seed, StreamTag::Trajectory, 0);
    SimulatedPath path = Garch11{}.simulate(sc.theta0, sc.dist, sc.n, sc.burn_in, rng);
    FitResult f = fit(path.returns);
    const double mu_hat = estimate_mu(f.residuals, sc.alpha).mu_hat;
    const BootstrapContext ctx = BootstrapContext::make(std::move(path.returns), std::move(f), sc.alpha);
    const BootstrapRun run = run_bootstrap(ctx, sc.B, derive_seed(sc.master_seed, StreamTag::Bootstrap, 0), workers);
    for (const auto& r : run.replicates) {
        if (r.converged) out.bootstrap_draws.push_back(root_n * (r.mu_star - mu_hat));
    }

    const double h = std::max(silverman_bandwidth(out.sampling_draws), silverman_bandwidth(out.bootstrap_draws));
    const auto [a_lo, a_hi] = std::minmax_element(out.sampling_draws.begin(), out.sampling_draws.end());
    const auto [b_lo, b_hi] = std::minmax_element(out.bootstrap_draws.begin(), out.bootstrap_draws.end());
    const std::vector<double> grid =
        linear_grid(std::min(*a_lo, *b_lo) - 5.0 * h, std::max(*a_hi, *b_hi) + 5.0 * h, n_grid);
    out.sampling = kde(out.sampling_draws, grid);
    out.bootstrap = kde(out.bootstrap_draws, grid);
    out.ks_distance = ks_two_sample(out.sampling_draws, out.bootstrap_draws);
    return out;
}

void write_curve_csv(std::ostream& os, const KdeCurve& curve) {
    os << "x,density\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        write_number(os, curve.x[i]);
        os << ',';
        write_number(os, curve.density[i]);
        os << '\n';
    }
}

}  // namespace esboot
