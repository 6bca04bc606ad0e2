#pragma once

// Modified Bessel functions of the third kind K_nu for integer orders,
// plus the exponentially scaled variants e^x K_nu(x) that keep the
// likelihood and the conditional-moment ratios finite for arguments far
// beyond the underflow point of K_nu itself.

namespace nigar {

// K_nu(x) for integer |nu| (K_{-nu} == K_nu). Throws std::domain_error for
// x <= 0 or non-integer order, std::overflow_error when the value exceeds
// the double range.
double bessel_k(double nu, double x);

// log K_nu(x), computed through the scaled kernel so it stays finite for
// large x (where K_nu itself underflows).
double log_bessel_k(double nu, double x);

// e^x K_nu(x). Safe for x up to ~1e300.
double bessel_k_scaled(double nu, double x);

namespace detail {
// Scaled order-0/1 kernels (minimax rational approximations).
double bessel_k0_scaled(double x);
double bessel_k1_scaled(double x);
}  // namespace detail

}  // namespace nigar
