#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "esboot/rng.hpp"

namespace esboot {

enum class InnovationKind { Normal, StudentT };

/// Innovation law with unit second moment: the standard normal, or a
/// Student-t with nu degrees of freedom rescaled by sigma_nu = sqrt((nu-2)/nu).
///
/// Only nu > 4 is accepted so that the fourth moment kappa is finite.
class InnovationDist {
public:
    static InnovationDist normal() { return InnovationDist(InnovationKind::Normal, 0.0); }
    /// Throws std::invalid_argument for nu <= 4 or non-finite nu.
    static InnovationDist student_t(double nu);

    InnovationKind kind() const noexcept { return kind_; }
    /// Degrees of freedom; 0 for the normal law.
    double nu() const noexcept { return nu_; }
    /// sigma_nu for the Student-t law, 1 for the normal law.
    double scale() const noexcept { return scale_; }

    double pdf(double x) const;
    double cdf(double x) const;
    /// Throws std::domain_error unless 0 < p < 1.
    double inv_cdf(double p) const;

    /// E[eta^4]: 3 for the normal law, 3(nu-2)/(nu-4) for the rescaled t.
    double kurtosis() const noexcept;

    /// One draw by inverse-cdf transform of a uniform from `rng`.
    double draw(RngStream& rng) const { return inv_cdf(rng.uniform_open()); }
    std::vector<double> sample(std::size_t n, RngStream& rng) const;

    std::string name() const;

    friend bool operator==(const InnovationDist&, const InnovationDist&) = default;

private:
    InnovationDist(InnovationKind kind, double nu);

    InnovationKind kind_;
    double nu_;
    double scale_;
};

/// Lower-tail quantities of an innovation law at level alpha:
///   xi    = F^{-1}(alpha)
///   mu    = -E[eta | eta < xi]            (ES of the innovation)
///   p     = E[eta^2 1{eta < xi}] - alpha
///   q     = E[eta^3 1{eta < xi}]
///   kappa = E[eta^4]
struct TailQuantities {
    double alpha = 0.0;
    double xi = 0.0;
    double mu = 0.0;
    double p = 0.0;
    double q = 0.0;
    double kappa = 0.0;
};

/// Closed forms in terms of the t_{nu-2} density at xi (normal: phi(xi)).
/// Requires 0 < alpha < 0.5.
TailQuantities tail_quantities_closed(const InnovationDist& dist, double alpha);

/// Thrown when adaptive quadrature cannot reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Same quantities by root-finding on the cdf and adaptive Gauss-Kronrod
/// quadrature of x^k f(x) over (-inf, xi] (and the real line for kappa).
/// Absolute quadrature tolerance 1e-10; throws QuadratureError otherwise.
TailQuantities tail_quantities_numeric(const InnovationDist& dist, double alpha);

/// Integral of g(x) f(x) over [lower, upper] (either bound may be infinite),
/// f the density of `dist`. Adaptive 15-point Gauss-Kronrod; the error
/// estimate is written to `error` when given.
double integrate_against_density(const InnovationDist& dist, const std::function<double(double)>& g,
                                 double lower, double upper, double* error = nullptr);

}  // namespace esboot
