#include "nigar/bessel.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

// Minimax rational approximations for K0 and K1 on (0,1] and (1,inf),
// see Russon and Blair, Chalk River Report AECL-3461, 1969. Max relative
// error is a few ulp over (0, 700]; the (1,inf) branch evaluates the
// scaled function e^x K_nu(x) directly. Higher integer orders use the
// forward recurrence K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu, which is
// stable in the increasing-order direction for K.

namespace nigar {

namespace {

template <std::size_t N>
double eval_poly(const double (&c)[N], double x) {
    double r = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) r = r * x + c[i];
    return r;
}

const double K0_P1[] = {
    2.4708152720399552679e+03, 5.9169059852270512312e+03,
    4.6850901201934832188e+02, 1.1999463724910714109e+01,
    1.3166052564989571850e-01, 5.8599221412826100000e-04};
const double K0_Q1[] = {2.1312714303849120380e+04, -2.4994418972832303646e+02,
                        1.0};
const double K0_P2[] = {-1.6128136304458193998e+06, -3.7333769444840079748e+05,
                        -1.7984434409411765813e+04, -2.9501657892958843865e+02,
                        -1.6414452837299064100e+00};
const double K0_Q2[] = {-1.6128136304458193998e+06, 2.9865713163054025489e+04,
                        -2.5064972445877992730e+02, 1.0};
const double K0_P3[] = {
    1.1600249425076035558e+02, 2.3444738764199315021e+03,
    1.8321525870183537725e+04, 7.1557062783764037541e+04,
    1.5097646353289914539e+05, 1.7398867902565686251e+05,
    1.0577068948034021957e+05, 3.1075408980684392399e+04,
    3.6832589957340267940e+03, 1.1394980557384778174e+02};
const double K0_Q3[] = {
    9.2556599177304839811e+01, 1.8821890840982713696e+03,
    1.4847228371802360957e+04, 5.8824616785857027752e+04,
    1.2689839587977598727e+05, 1.5144644673520157801e+05,
    9.7418829762268075784e+04, 3.1474655750295278825e+04,
    4.4329628889746408858e+03, 2.0013443064949242491e+02,
    1.0};

const double K1_P1[] = {-2.2149374878243304548e+06, 7.1938920065420586101e+05,
                        1.7733324035147015630e+05, 7.1885382604084798576e+03,
                        9.9991373567429309922e+01, 4.8127070456878442310e-01};
const double K1_Q1[] = {-2.2149374878243304548e+06, 3.7264298672067697862e+04,
                        -2.8143915754538725829e+02, 1.0};
const double K1_P2[] = {0.0,
                        -1.3531161492785421328e+06,
                        -1.4758069205414222471e+05,
                        -4.5051623763436087023e+03,
                        -5.3103913335180275253e+01,
                        -2.2795590826955002390e-01};
const double K1_Q2[] = {-2.7062322985570842656e+06, 4.3117653211351080007e+04,
                        -3.0507151578787595807e+02, 1.0};
const double K1_P3[] = {
    2.2196792496874548962e+00, 4.4137176114230414036e+01,
    3.4122953486801312910e+02, 1.3319486433183221990e+03,
    2.8590657697910288226e+03, 3.4540675585544584407e+03,
    2.3123742209168871550e+03, 8.1094256146537402173e+02,
    1.3182609918569941308e+02, 7.5584584631176030810e+00,
    6.4257745859173138767e-02};
const double K1_Q3[] = {
    1.7710478032601086579e+00, 3.4552228452758912848e+01,
    2.5951223655579051357e+02, 9.6929165726802648634e+02,
    1.9448440788918006154e+03, 2.1181000487171943810e+03,
    1.2082692316002348638e+03, 3.3031020088765390854e+02,
    3.6001069306861518855e+01, 1.0};

// Unscaled K0/K1 on (0,1]; the ascending-series branch never overflows
// for K0 and overflows for K1 only when 1/x does.
double k0_small(double x) {
    const double y = x * x;
    const double r1 = eval_poly(K0_P1, y) / eval_poly(K0_Q1, y);
    const double r2 = eval_poly(K0_P2, y) / eval_poly(K0_Q2, y);
    return r1 - std::log(x) * r2;
}

double k1_small(double x) {
    const double y = x * x;
    const double r1 = eval_poly(K1_P1, y) / eval_poly(K1_Q1, y);
    const double r2 = eval_poly(K1_P2, y) / eval_poly(K1_Q2, y);
    return (r1 + std::log(x) * r2) / x;
}

void check_arg(double x) {
    if (!(x > 0.0))
        throw std::domain_error("bessel_k: argument must be > 0, got " +
                                std::to_string(x));
}

// Integer |nu| or domain error; this kernel covers integer
// orders only (negative orders fold onto positive by K_{-nu} = K_nu).
int order_index(double nu) {
    const double a = std::fabs(nu);
    if (a != std::floor(a) || a > 128.0)
        throw std::domain_error("bessel_k: only integer orders |nu| <= 128 "
                                "are supported");
    return static_cast<int>(a);
}

}  // namespace

namespace detail {

double bessel_k0_scaled(double x) {
    if (x <= 1.0) return k0_small(x) * std::exp(x);
    const double y = 1.0 / x;
    return eval_poly(K0_P3, y) / eval_poly(K0_Q3, y) / std::sqrt(x);
}

double bessel_k1_scaled(double x) {
    if (x <= 1.0) return k1_small(x) * std::exp(x);
    const double y = 1.0 / x;
    return eval_poly(K1_P3, y) / eval_poly(K1_Q3, y) / std::sqrt(x);
}

}  // namespace detail

double bessel_k_scaled(double nu, double x) {
    check_arg(x);
    const int n = order_index(nu);
    double km = detail::bessel_k0_scaled(x);
    if (n == 0) return km;
    double k = detail::bessel_k1_scaled(x);
    for (int i = 1; i < n; ++i) {
        const double kp = km + (2.0 * i / x) * k;
        km = k;
        k = kp;
        if (std::isinf(k))
            throw std::overflow_error("bessel_k: overflow in recurrence at "
                                      "order " + std::to_string(i + 1));
    }
    return k;
}

double bessel_k(double nu, double x) {
    check_arg(x);
    const int n = order_index(nu);
    double v;
    if (x <= 1.0) {
        // Work unscaled below 1 so tiny arguments do not round through exp.
        double km = k0_small(x);
        if (n == 0) {
            v = km;
        } else {
            double k = k1_small(x);
            for (int i = 1; i < n; ++i) {
                const double kp = km + (2.0 * i / x) * k;
                km = k;
                k = kp;
            }
            v = k;
        }
    } else {
        v = bessel_k_scaled(nu, x) * std::exp(-x);
    }
    if (std::isinf(v))
        throw std::overflow_error("bessel_k: result overflows at x = " +
                                  std::to_string(x));
    return v;
}

double log_bessel_k(double nu, double x) {
    check_arg(x);
    const double s = bessel_k_scaled(nu, x);
    if (std::isinf(s))
        throw std::overflow_error("log_bessel_k: scaled kernel overflows");
    return std::log(s) - x;
}

}  // namespace nigar
