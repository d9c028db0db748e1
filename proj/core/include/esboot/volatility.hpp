#pragma once

#include <array>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "esboot/distributions.hpp"
#include "esboot/rng.hpp"

namespace esboot {

/// GARCH(1,1) parameters: sigma^2_{t+1} = omega + alpha eps_t^2 + beta sigma^2_t.
struct GarchParams {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    std::array<double, 3> to_array() const noexcept { return {omega, alpha, beta}; }
    static GarchParams from_array(const std::array<double, 3>& a) noexcept { return {a[0], a[1], a[2]}; }

    double persistence() const noexcept { return alpha + beta; }
    /// omega > 0, alpha >= 0, beta >= 0, all finite.
    bool is_positive() const noexcept;
    /// omega / (1 - alpha - beta); requires persistence() < 1.
    double unconditional_variance() const;

    friend bool operator==(const GarchParams&, const GarchParams&) = default;
};

/// How the unobserved presample enters the truncated filter.
struct InitScheme {
    enum class Kind {
        /// Every presample eps^2 replaced by the sample second moment s^2:
        /// sigma^2_1(theta) = (omega + alpha s^2) / (1 - beta), differentiated in theta.
        Presample,
        /// sigma^2_1 = s^2, held constant in theta.
        SampleMoment,
        /// sigma^2_1 = value, held constant in theta.
        Fixed,
    };
    Kind kind = Kind::Presample;
    double value = 0.0;

    static InitScheme presample() { return {Kind::Presample, 0.0}; }
    static InitScheme sample_moment() { return {Kind::SampleMoment, 0.0}; }
    static InitScheme fixed(double sigma2_1) { return {Kind::Fixed, sigma2_1}; }
};

using Gradient = std::array<double, 3>;

/// Truncated filter output for t = 1..n+1 (index t-1). The last entry is the
/// one-step-ahead value.
struct FilterOutput {
    std::vector<double> sigma2;
    /// d sigma^2_t / d theta
    std::vector<Gradient> dsigma2;
    /// D_t = (1/sigma_t) d sigma_t / d theta = dsigma2 / (2 sigma2)
    std::vector<Gradient> D;

    std::size_t size() const noexcept { return sigma2.size(); }
};

struct SimulatedPath {
    std::vector<double> returns;     ///< eps_1..eps_n
    std::vector<double> sigma2_true; ///< sigma^2_1..sigma^2_{n+1}
};

/// Interface every volatility model in the library provides. GARCH(1,1) is the
/// only instance shipped.
template <typename M>
concept VolatilityModel = requires(const M& m, const typename M::Params& p, std::span<const double> x,
                                   InitScheme init, double lambda, const InnovationDist& dist,
                                   RngStream& rng, std::span<double> out) {
    { m.filter(p, x, init) } -> std::same_as<FilterOutput>;
    { m.filter_variance(p, x, init, out) } -> std::same_as<void>;
    { m.simulate(p, dist, std::size_t{}, std::size_t{}, rng) } -> std::same_as<SimulatedPath>;
    { m.scale_params(p, lambda) } -> std::same_as<typename M::Params>;
};

class Garch11 {
public:
    using Params = GarchParams;

    /// sigma^2, its theta-gradient and D_t over t = 1..n+1.
    /// Throws std::invalid_argument on empty or non-finite returns.
    FilterOutput filter(const GarchParams& params, std::span<const double> returns,
                        InitScheme init = InitScheme::presample()) const;

    /// sigma^2 only, written to `out` (size n+1). No validation; hot path of the criterion.
    void filter_variance(const GarchParams& params, std::span<const double> returns, InitScheme init,
                         std::span<double> out) const;

    /// Exact recursion started at the unconditional variance; the first
    /// `burn_in` steps are discarded. Throws unless alpha + beta < 1.
    SimulatedPath simulate(const GarchParams& params, const InnovationDist& dist, std::size_t n,
                           std::size_t burn_in, RngStream& rng) const;

    /// theta_lambda with lambda * sigma(x; theta) = sigma(x; theta_lambda):
    /// (lambda^2 omega, lambda^2 alpha, beta).
    GarchParams scale_params(const GarchParams& params, double lambda) const;

    /// Starting value sigma^2_1 and its gradient for the given scheme.
    static std::pair<double, Gradient> initial_value(const GarchParams& params, double second_moment,
                                                     InitScheme init);
};

static_assert(VolatilityModel<Garch11>);

/// Mean of squares, the s^2 used by the presample schemes.
double second_moment(std::span<const double> x) noexcept;

}  // namespace esboot
