#include "esboot/distributions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

namespace esboot {

namespace bm = boost::math;

namespace {

constexpr double kQuadratureTolerance = 1e-10;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::domain_error("tail level alpha must lie in (0, 0.5)");
    }
}

}  // namespace

InnovationDist::InnovationDist(InnovationKind kind, double nu)
    : kind_(kind), nu_(nu), scale_(kind == InnovationKind::StudentT ? std::sqrt((nu - 2.0) / nu) : 1.0) {}

InnovationDist InnovationDist::student_t(double nu) {
    if (!std::isfinite(nu) || nu <= 4.0) {
        throw std::invalid_argument("Student-t innovations need nu > 4 (finite fourth moment)");
    }
    return InnovationDist(InnovationKind::StudentT, nu);
}

double InnovationDist::pdf(double x) const {
    if (kind_ == InnovationKind::Normal) return bm::pdf(bm::normal_distribution<double>(), x);
    return bm::pdf(bm::students_t_distribution<double>(nu_), x / scale_) / scale_;
}

double InnovationDist::cdf(double x) const {
    if (kind_ == InnovationKind::Normal) return bm::cdf(bm::normal_distribution<double>(), x);
    return bm::cdf(bm::students_t_distribution<double>(nu_), x / scale_);
}

double InnovationDist::inv_cdf(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inv_cdf: probability must lie in (0, 1)");
    if (kind_ == InnovationKind::Normal) return bm::quantile(bm::normal_distribution<double>(), p);
    return scale_ * bm::quantile(bm::students_t_distribution<double>(nu_), p);
}

double InnovationDist::kurtosis() const noexcept {
    if (kind_ == InnovationKind::Normal) return 3.0;
    return 3.0 * (nu_ - 2.0) / (nu_ - 4.0);
}

std::vector<double> InnovationDist::sample(std::size_t n, RngStream& rng) const {
    std::vector<double> out(n);
    for (auto& x : out) x = draw(rng);
    return out;
}

std::string InnovationDist::name() const {
    if (kind_ == InnovationKind::Normal) return "normal";
    std::ostringstream os;
    os << "t" << nu_;
    return os.str();
}

TailQuantities tail_quantities_closed(const InnovationDist& dist, double alpha) {
    check_alpha(alpha);
    TailQuantities tq;
    tq.alpha = alpha;
    tq.kappa = dist.kurtosis();
    tq.xi = dist.inv_cdf(alpha);
    const double xi2 = tq.xi * tq.xi;

    if (dist.kind() == InnovationKind::Normal) {
        const double phi = bm::pdf(bm::normal_distribution<double>(), tq.xi);
        tq.mu = phi / alpha;
        tq.p = -tq.xi * phi;
        tq.q = -(2.0 + xi2) * phi;
        return tq;
    }

    // f_{nu-2}: the unscaled t density with nu-2 degrees of freedom, at xi.
    const double nu = dist.nu();
    const double s2 = dist.scale() * dist.scale();
    const double f = bm::pdf(bm::students_t_distribution<double>(nu - 2.0), tq.xi);
    tq.mu = f / alpha;
    tq.p = -((nu - 1.0) / (nu - 2.0)) * tq.xi * f;
    tq.q = -(2.0 * (nu * s2 + xi2) / (nu - 3.0) + xi2) * f;
    return tq;
}

double integrate_against_density(const InnovationDist& dist, const std::function<double(double)>& g,
                                 double lower, double upper, double* error) {
    auto integrand = [&](double x) {
        const double fx = dist.pdf(x);
        return fx == 0.0 ? 0.0 : g(x) * fx;
    };
    // Infinite ends are split off 40 units away from the finite end (or from 0)
    // so that Gauss-Kronrod sees the bulk of the mass on a bounded piece.
    constexpr double kSpan = 40.0;
    std::vector<double> cuts;
    if (std::isinf(lower) && std::isinf(upper)) {
        cuts = {lower, -kSpan, 0.0, kSpan, upper};
    } else if (std::isinf(lower)) {
        cuts = {lower, upper - kSpan, upper};
    } else if (std::isinf(upper)) {
        cuts = {lower, lower + kSpan, upper};
    } else {
        cuts = {lower, upper};
    }
    double value = 0.0;
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        value += bm::quadrature::gauss_kronrod<double, 15>::integrate(integrand, cuts[i], cuts[i + 1], 12, 1e-14,
                                                                      &err);
        err_total += err;
    }
    if (error != nullptr) *error = err_total;
    return value;
}

TailQuantities tail_quantities_numeric(const InnovationDist& dist, double alpha) {
    check_alpha(alpha);
    TailQuantities tq;
    tq.alpha = alpha;

    std::uintmax_t max_iter = 200;
    const auto root = bm::tools::toms748_solve([&](double x) { return dist.cdf(x) - alpha; }, -200.0, 0.0,
                                               bm::tools::eps_tolerance<double>(52), max_iter);
    tq.xi = 0.5 * (root.first + root.second);

    const double inf = std::numeric_limits<double>::infinity();
    double worst = 0.0;
    auto tail_moment = [&](int k) {
        double err = 0.0;
        const double v = integrate_against_density(dist, [k](double x) { return std::pow(x, k); }, -inf, tq.xi, &err);
        worst = std::max(worst, err);
        return v;
    };
    tq.mu = -tail_moment(1) / alpha;
    tq.p = tail_moment(2) - alpha;
    tq.q = tail_moment(3);

    double err = 0.0;
    tq.kappa = integrate_against_density(dist, [](double x) { return x * x * x * x; }, -inf, inf, &err);
    worst = std::max(worst, err);

    if (!(worst <= kQuadratureTolerance)) {
        std::ostringstream os;
        os << "tail quadrature for " << dist.name() << " at alpha=" << alpha
           << " did not reach 1e-10 (achieved " << worst << ")";
        throw QuadratureError(os.str(), worst);
    }
    return tq;
}

}  // namespace esboot
