#pragma once

#include "nigar/rng.hpp"

namespace nigar {

// Normal inverse Gaussian law NIG(alpha, beta, mu, delta).
// Requires delta > 0 and alpha > |beta| so that gamma = sqrt(alpha^2 -
// beta^2) is strictly positive; every estimator formula divides by gamma.
struct NigParams {
    double alpha;
    double beta;
    double mu;
    double delta;

    NigParams(double alpha, double beta, double mu, double delta);

    double gamma() const;
};

// Inverse Gaussian mixing law IG(gamma, delta). In the mean/shape
// parametrization used by the sampler: mean = delta/gamma, shape = delta^2.
struct IgParams {
    double gamma;
    double delta;

    IgParams(double gamma, double delta);

    double mean() const { return delta / gamma; }
    double shape() const { return delta * delta; }
};

// Posterior conditional moments of the mixing variable given a residual:
// s = E[G | eps], w = E[1/G | eps]. Always s > 0, w > 0, s*w >= 1.
struct CondMoments {
    double s;
    double w;
};

struct Moments {
    double mean;
    double variance;
};

// IG(gamma, delta) density. Throws std::domain_error for x <= 0.
double ig_pdf(double x, const IgParams& p);

// One IG(gamma, delta) draw via the Michael-Schucany-Haas construction:
// squared normal, smaller root of the quadratic, then a uniform pick
// between the root and its mirror. The root is evaluated in conjugate
// form to avoid cancellation when mean * Y dominates the shape.
double ig_sample(const IgParams& p, RngStream& rng);

// phi(x) = 1 + ((x - mu)/delta)^2.
double nig_phi(double x, const NigParams& p);

// Log-density of NIG(alpha, beta, mu, delta), computed through the scaled
// Bessel kernel so it stays finite when delta*alpha*sqrt(phi) is large.
double nig_logpdf(double x, const NigParams& p);

double nig_pdf(double x, const NigParams& p);

// One NIG draw via the variance-mean mixture: mu + beta G + sqrt(G) Z.
double nig_sample(const NigParams& p, RngStream& rng);

// E[G | eps] and E[1/G | eps] for the GIG posterior of the mixing
// variable. Uses scaled Bessel ratios; finite for arguments up to ~1e6.
CondMoments gig_cond_moments(double eps, const NigParams& p);

// Closed-form mean (mu*gamma + delta*beta)/gamma and variance
// delta*alpha^2/gamma^3.
Moments nig_moments(const NigParams& p);

}  // namespace nigar
