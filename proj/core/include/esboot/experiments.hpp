#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "esboot/bootstrap.hpp"
#include "esboot/distributions.hpp"
#include "esboot/es_estimation.hpp"
#include "esboot/kde.hpp"
#include "esboot/volatility.hpp"

namespace esboot {

enum class Persistence { Low, High };

/// DGP parameters of the two study designs; omega = 0.05 * 20^2 / 252 in both.
GarchParams study_theta0(Persistence persistence);

/// One cell of the Monte Carlo design.
struct Scenario {
    std::string id;
    GarchParams theta0;
    InnovationDist dist = InnovationDist::normal();
    double alpha = 0.05;
    std::size_t n = 500;
    double gamma = 0.10;
    std::size_t B = 500;
    std::size_t S = 500;
    std::size_t burn_in = 1000;
    std::uint64_t master_seed = 20190101;

    /// Throws std::invalid_argument when the scenario cannot be run.
    void validate() const;
};

/// Scenario for a persistence/innovation/level/size cell with a generated id.
Scenario make_scenario(Persistence persistence, const InnovationDist& dist, double alpha, std::size_t n,
                       double gamma, std::size_t B, std::size_t S, std::uint64_t master_seed);

enum class IntervalKind : std::size_t { EP = 0, RT = 1, SY = 2, AS = 3 };
inline constexpr std::array<IntervalKind, 4> kIntervalKinds{IntervalKind::EP, IntervalKind::RT, IntervalKind::SY,
                                                             IntervalKind::AS};
std::string_view interval_name(IntervalKind kind);

/// Where the true value sits relative to an interval. `Below`: under the
/// lower bound; `Above`: over the upper bound.
enum class Position { Inside, Below, Above };
Position classify(const Interval& interval, double truth);

struct TrajectoryRecord {
    std::size_t index = 0;
    bool excluded = false;
    std::string exclusion_reason;
    double true_es = 0.0;  ///< mu_alpha * sigma_{n+1}(theta0)
    double es_hat = 0.0;
    double mu_hat = 0.0;
    GarchParams theta_hat;
    int fit_iterations = 0;
    std::size_t bootstrap_failures = 0;
    std::array<Interval, 4> intervals{};   ///< indexed by IntervalKind
    std::array<Position, 4> positions{};
};

/// simulate -> fit -> ES -> Gamma_hat and delta-method interval -> bootstrap
/// -> EP/RT/SY -> classification. Streams derive from (master_seed, index).
TrajectoryRecord run_trajectory(const Scenario& scenario, std::size_t index);

struct IntervalSummary {
    std::size_t inside = 0;
    std::size_t below = 0;
    std::size_t above = 0;
    double coverage_pct = 0.0;
    double below_pct = 0.0;
    double above_pct = 0.0;
    double avg_length = 0.0;
};

struct StudySummary {
    Scenario scenario;
    std::array<IntervalSummary, 4> by_kind{};
    std::size_t included = 0;
    std::size_t excluded = 0;

    const IntervalSummary& operator[](IntervalKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
};

/// Averages over the included trajectories.
StudySummary summarize(const Scenario& scenario, std::span<const TrajectoryRecord> records);

struct StudyResult {
    StudySummary summary;
    std::vector<TrajectoryRecord> records;
};

class StudyAborted : public std::runtime_error {
public:
    StudyAborted(const std::string& what, std::size_t excluded) : std::runtime_error(what), excluded_(excluded) {}
    std::size_t excluded() const noexcept { return excluded_; }

private:
    std::size_t excluded_;
};

/// Runs S trajectories on `workers` threads (0: all cores). Results depend only
/// on the scenario. Throws StudyAborted when more than 5% are excluded.
StudyResult run_study(const Scenario& scenario, std::size_t workers = 0,
                      const std::function<void(std::size_t)>& on_trajectory_done = {});

/// Header: scenario_id,n,interval_type,avg_coverage_pct,below_pct,above_pct,avg_length,excluded_count
/// One row per EP/RT/SY interval per summary; the delta-method row (AS) only when asked.
void write_study_csv(std::ostream& os, std::span<const StudySummary> summaries, bool include_asymptotic = false);

struct DensityComparison {
    std::vector<double> sampling_draws;   ///< sqrt(n)(mu_hat - mu_alpha) across trajectories
    std::vector<double> bootstrap_draws;  ///< sqrt(n)(mu* - mu_hat) on trajectory 0
    KdeCurve sampling;
    KdeCurve bootstrap;
    double ks_distance = 0.0;             ///< two-sample KS between the populations
    std::size_t excluded = 0;
};

/// Both populations plus Gaussian KDEs on one shared grid of `n_grid` points.
DensityComparison density_comparison(const Scenario& scenario, std::size_t n_grid, std::size_t workers = 0);

/// Two-column CSV "x,density".
void write_curve_csv(std::ostream& os, const KdeCurve& curve);

}  // namespace esboot
