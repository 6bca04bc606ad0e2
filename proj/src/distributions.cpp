#include "nigar/distributions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nigar/bessel.hpp"
#include "nigar/errors.hpp"

namespace nigar {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw InvalidParamsError(std::string(name) + " must be finite");
}

}  // namespace

NigParams::NigParams(double alpha_, double beta_, double mu_, double delta_)
    : alpha(alpha_), beta(beta_), mu(mu_), delta(delta_) {
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    require_finite(mu, "mu");
    require_finite(delta, "delta");
    if (!(delta > 0.0))
        throw InvalidParamsError("NigParams: delta must be > 0, got " +
                                 std::to_string(delta));
    if (!(alpha > std::fabs(beta)))
        throw InvalidParamsError("NigParams: alpha must exceed |beta|, got "
                                 "alpha = " + std::to_string(alpha) +
                                 ", beta = " + std::to_string(beta));
}

double NigParams::gamma() const {
    return std::sqrt((alpha - beta) * (alpha + beta));
}

IgParams::IgParams(double gamma_, double delta_)
    : gamma(gamma_), delta(delta_) {
    require_finite(gamma, "gamma");
    require_finite(delta, "delta");
    if (!(gamma > 0.0) || !(delta > 0.0))
        throw InvalidParamsError("IgParams: gamma and delta must be > 0");
}

double ig_pdf(double x, const IgParams& p) {
    if (!(x > 0.0))
        throw std::domain_error("ig_pdf: x must be > 0, got " +
                                std::to_string(x));
    const double log_pdf = std::log(p.delta) - kLogSqrt2Pi +
                           p.delta * p.gamma - 1.5 * std::log(x) -
                           0.5 * (p.delta * p.delta / x + p.gamma * p.gamma * x);
    return std::exp(log_pdf);
}

double ig_sample(const IgParams& p, RngStream& rng) {
    const double mean = p.mean();
    const double shape = p.shape();
    const double n = rng.normal();
    const double y = n * n;
    // Smaller root of x^2 - (mean + mean^2 y / shape) x + mean^2 = 0,
    // written as mean (s - a)/(s + a) with a = mean*y, s = sqrt(a^2 + 4 shape a):
    // no cancellation for large a, and (s-a)(s+a) = 4 shape a.
    const double a = mean * y;
    double x1;
    if (a == 0.0) {
        x1 = mean;
    } else {
        const double s = std::sqrt(a * (a + 4.0 * shape));
        x1 = mean * (4.0 * shape * a) / ((s + a) * (s + a));
    }
    const double u = rng.uniform();
    return u <= mean / (mean + x1) ? x1 : mean * mean / x1;
}

double nig_phi(double x, const NigParams& p) {
    const double z = (x - p.mu) / p.delta;
    return 1.0 + z * z;
}

double nig_logpdf(double x, const NigParams& p) {
    const double phi = nig_phi(x, p);
    const double sqrt_phi = std::sqrt(phi);
    const double omega = p.delta * p.alpha * sqrt_phi;
    return std::log(p.alpha / kPi) + p.delta * p.gamma() - p.beta * p.mu -
           0.5 * std::log(phi) + log_bessel_k(1, omega) + p.beta * x;
}

double nig_pdf(double x, const NigParams& p) {
    return std::exp(nig_logpdf(x, p));
}

double nig_sample(const NigParams& p, RngStream& rng) {
    const double g = ig_sample(IgParams(p.gamma(), p.delta), rng);
    const double z = rng.normal();
    return p.mu + p.beta * g + std::sqrt(g) * z;
}

CondMoments gig_cond_moments(double eps, const NigParams& p) {
    const double sqrt_phi = std::sqrt(nig_phi(eps, p));
    const double omega = p.alpha * p.delta * sqrt_phi;
    const double k0 = detail::bessel_k0_scaled(omega);
    const double k1 = detail::bessel_k1_scaled(omega);
    const double ratio01 = k0 / k1;
    CondMoments m;
    m.s = (p.delta * sqrt_phi / p.alpha) * ratio01;
    // K2/K1 = K0/K1 + 2/omega by the order recurrence.
    m.w = (p.alpha / (p.delta * sqrt_phi)) * (ratio01 + 2.0 / omega);
    return m;
}

Moments nig_moments(const NigParams& p) {
    const double g = p.gamma();
    Moments m;
    m.mean = (p.mu * g + p.delta * p.beta) / g;
    m.variance = p.delta * p.alpha * p.alpha / (g * g * g);
    return m;
}

}  // namespace nigar
