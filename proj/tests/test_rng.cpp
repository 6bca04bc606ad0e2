#include "nigar/rng.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

using nigar::RngStream;

TEST_CASE("identical (seed, stream) reproduces the sequence bit for bit") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    RngStream c(42, 7), d(42, 7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(c.uniform() == d.uniform());
        CHECK(c.normal() == d.normal());
    }
}

TEST_CASE("distinct streams and seeds decorrelate") {
    RngStream a(42, 0), b(42, 1), c(43, 0);
    int same_ab = 0, same_ac = 0;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        same_ab += va == b.next_u64();
        same_ac += va == c.next_u64();
    }
    CHECK(same_ab == 0);
    CHECK(same_ac == 0);
}

TEST_CASE("uniform range and balance") {
    RngStream rng(1);
    int below_half = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        below_half += u < 0.5;
    }
    CHECK(std::fabs(below_half / static_cast<double>(n) - 0.5) < 0.005);
    const double up = rng.uniform_pos();
    CHECK(up > 0.0);
    CHECK(up <= 1.0);
}

TEST_CASE("normal moments") {
    RngStream rng(7);
    const int n = 1000000;
    double s = 0.0, s2 = 0.0, s3 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        s2 += z * z;
        s3 += z * z * z;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    // 4 standard errors of the Monte Carlo estimates.
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::fabs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::fabs(s3 / n) < 4.0 * std::sqrt(15.0 / n));
}
