#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "esboot/distributions.hpp"
#include "esboot/qmle.hpp"

namespace esboot {

/// Number of order statistics in the lower tail at level alpha: floor(alpha n) + 1.
/// The product is nudged up by a relative 1e-12 so that e.g. 0.29 * 100 counts as 29.
std::size_t tail_count_for(double alpha, std::size_t n);

/// Order-statistic rank ceil(p m) clamped to [1, m], nudged down by a relative
/// 1e-12 so that exact multiples are not rounded up.
std::size_t ceil_rank(double p, std::size_t m);

struct TailSelection {
    double xi = 0.0;                 ///< order statistic of rank floor(alpha n) + 1
    std::vector<std::size_t> index;  ///< tail members, ascending by (value, index)
};

/// Empirical alpha-quantile and its lower-tail set. Tail membership is
/// value <= xi with ties split by position, so the set always has exactly
/// floor(alpha n) + 1 members. Requires a nonempty input and alpha n >= 1.
TailSelection empirical_quantile(std::span<const double> values, double alpha);

struct MuEstimate {
    double xi_hat = 0.0;
    double mu_hat = 0.0;
    std::size_t tail_count = 0;
};

/// mu_hat = -(mean of the tail residuals).
MuEstimate estimate_mu(std::span<const double> residuals, double alpha);

struct EsEstimate {
    double alpha = 0.0;
    double xi_hat = 0.0;
    double mu_hat = 0.0;
    double sigma_next = 0.0;  ///< sigma_{n+1}(theta_hat)
    double es_hat = 0.0;      ///< mu_hat * sigma_next
    std::size_t tail_count = 0;
};

/// Conditional ES of the next return from a QML fit. Throws std::invalid_argument
/// when the fit did not converge.
EsEstimate conditional_es(const FitResult& fit, double alpha);

/// Asymptotic-variance pieces of mu_hat that depend only on the innovation law.
struct MuVariance {
    double tail_variance = 0.0;    ///< Var[(eta - xi) 1{eta < xi}]
    double tail_covariance = 0.0;  ///< Cov[eta^2, (eta - xi) 1{eta < xi}]
    double sigma2_alpha = 0.0;     ///< tail_variance / alpha^2
    double x_alpha = 0.0;          ///< -tail_covariance / alpha
    double phi_alpha = 0.0;        ///< x_alpha / 2 - mu (kappa - 1) / 4
    double nu_alpha = 0.0;         ///< sigma2_alpha - x_alpha mu + (kappa - 1) mu^2 / 4
};

/// Assembles MuVariance from (alpha, xi, mu, p, q, kappa), whether those are
/// population values or residual-based plug-ins.
MuVariance mu_variance(const TailQuantities& tq);

/// Thrown when J_hat is numerically singular (condition number above 1e12).
class SingularInformationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GammaHat {
    double alpha = 0.0;
    double kappa_hat = 0.0;
    Eigen::Vector3d Omega_hat = Eigen::Vector3d::Zero();
    Eigen::Matrix3d J_hat = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d J_inv = Eigen::Matrix3d::Zero();
    double p_hat = 0.0;
    double q_hat = 0.0;
    double xi_hat = 0.0;
    double mu_hat = 0.0;
    double sigma2_alpha_hat = 0.0;
    double x_alpha_hat = 0.0;
    double phi_alpha_hat = 0.0;
    double nu_alpha_hat = 0.0;
    /// Joint covariance of sqrt(n)(theta_hat - theta0, mu_hat - mu):
    ///   [ (kappa-1)/4 J^-1      phi J^-1 Omega ]
    ///   [ phi Omega' J^-1       nu             ]
    Eigen::Matrix4d Gamma = Eigen::Matrix4d::Zero();
};

/// Residual-based plug-in estimate of the joint asymptotic covariance.
GammaHat gamma_hat(const FitResult& fit, double alpha);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width = 0.0;

    static Interval from_bounds(double lo, double hi) { return {lo, hi, hi - lo}; }
    double length() const noexcept { return width; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

struct AsymptoticInterval {
    Interval interval;
    double gamma = 0.0;
    double quadratic_form = 0.0;  ///< v' Gamma_hat v, after clamping
    bool clamped = false;         ///< true when a negative quadratic form was set to 0
};

/// Delta-method interval ES_hat -/+ |Phi^{-1}(gamma/2)| sqrt(v' Gamma v / n),
/// v = (mu_hat d sigma_{n+1}/d theta, sigma_{n+1}).
AsymptoticInterval asymptotic_interval(const FitResult& fit, const EsEstimate& es, const GammaHat& gh,
                                       double gamma);

}  // namespace esboot
