#include "nigar/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "nigar/errors.hpp"
#include "support/oracles.hpp"

using namespace nigar;

namespace {
const NigParams kSimLaw(2.24, 1.0, 1.0, 2.0);

TimeSeries sim(const NigArModel& m, std::size_t n, std::uint64_t seed) {
    RngStream rng(seed);
    return simulate_path(m, n, rng);
}

std::vector<double> nig_draws(const NigParams& p, std::size_t n,
                              std::uint64_t seed, std::uint64_t stream = 0) {
    RngStream rng(seed, stream);
    std::vector<double> v(n);
    for (double& x : v) x = nig_sample(p, rng);
    return v;
}
}  // namespace

TEST_CASE("acf basics") {
    const TimeSeries y = sim(NigArModel{0.0, kSimLaw}, 10000, 1);
    const auto pts = acf(y, 30);
    REQUIRE(pts.size() == 31);
    CHECK(pts[0].value == 1.0);
    CHECK(pts[0].lag == 0);
    const double band = 1.96 / std::sqrt(10000.0);
    CHECK(pts[0].conf_band == doctest::Approx(band));

    // iid: at least 93% of lags 1..30 inside the white-noise band.
    int inside = 0;
    for (std::size_t k = 1; k <= 30; ++k)
        inside += std::fabs(pts[k].value) < band;
    CHECK(inside >= 28);

    TimeSeries c;
    c.values.assign(100, 3.0);
    CHECK_THROWS_AS(acf(c, 5), ConstantSeriesError);
    CHECK_THROWS_AS(acf(y, 10000), std::invalid_argument);
}

TEST_CASE("acf of an AR(1) tail segment decays like rho^k") {
    const TimeSeries full = sim(NigArModel{0.9, kSimLaw}, 30000, 2);
    TimeSeries tail;
    tail.values.assign(full.values.begin() + 10000, full.values.end());
    const auto pts = acf(tail, 5);
    for (std::size_t k = 1; k <= 5; ++k)
        CHECK(std::fabs(pts[k].value - std::pow(0.9, k)) < 0.05);
}

TEST_CASE("acf and pacf match the definitional computation") {
    RngStream rng(33);
    for (std::size_t n : {5u, 17u, 50u}) {
        TimeSeries y;
        y.values.resize(n);
        for (double& v : y.values) v = rng.normal() + 0.3 * rng.uniform();
        const std::size_t max_lag = n / 2;
        const auto a = acf(y, max_lag);
        const auto p = pacf(y, max_lag);
        const auto a_ref = oracle::acf_definitional(y.values, max_lag);
        const auto p_ref = oracle::pacf_definitional(y.values, max_lag);
        for (std::size_t k = 0; k <= max_lag; ++k) {
            CHECK(std::fabs(a[k].value - a_ref[k]) <= 1e-12);
            CHECK(std::fabs(p[k].value - p_ref[k]) <= 1e-12);
        }
    }
}

TEST_CASE("pacf of AR(1): spike at lag 1, cutoff beyond") {
    const TimeSeries y = sim(NigArModel{0.5, kSimLaw}, 10000, 4);
    const auto pts = pacf(y, 30);
    CHECK(pts[0].value == 1.0);
    CHECK(pts[1].value == doctest::Approx(0.5).epsilon(0.03 / 0.5));

    const auto a = acf(y, 1);
    CHECK(pts[1].value == a[1].value);  // Durbin-Levinson base case

    int inside = 0;
    for (std::size_t k = 2; k <= 30; ++k)
        inside += std::fabs(pts[k].value) < pts[k].conf_band;
    CHECK(inside >= 26);  // >= 90% of 29 lags
}

TEST_CASE("ks_2sample") {
    const std::vector<double> a{0.3, 1.2, -0.5, 2.0, 0.0};
    TestResult same = ks_2sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    const std::vector<double> lo{0.1, 0.5, 0.9};
    const std::vector<double> hi{2.1, 2.5, 2.9};
    CHECK(ks_2sample(lo, hi).statistic == 1.0);

    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y{1.5, 2.5, 3.5, 4.5};
    CHECK(ks_2sample(x, y).statistic == doctest::Approx(0.25).epsilon(1e-14));

    CHECK_THROWS_AS(ks_2sample(std::vector<double>{}, a),
                    std::invalid_argument);
}

TEST_CASE("ks_2sample equals exhaustive enumeration and is symmetric") {
    RngStream rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t na = 2 + rng.next_u64() % 18;
        const std::size_t nb = 2 + rng.next_u64() % 18;
        std::vector<double> a(na), b(nb);
        for (double& v : a) v = std::round(rng.normal() * 4.0) / 4.0;  // ties
        for (double& v : b) v = std::round(rng.normal() * 4.0) / 4.0;
        const TestResult r = ks_2sample(a, b);
        const double ref = oracle::ks_2sample_exhaustive(a, b);
        CHECK(r.statistic == doctest::Approx(ref).epsilon(1e-13));
        CHECK(r.statistic == ks_2sample(b, a).statistic);
        CHECK(r.statistic >= 0.0);
        CHECK(r.statistic <= 1.0);
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
    }
}

TEST_CASE("jarque_bera") {
    // Symmetric sample with kurtosis exactly 3: statistic 0, p-value 1.
    std::vector<double> flat{0, 0, 0, 0, 0, 0, 0, 0, 3.0, -3.0, 3.0, -3.0};
    const TestResult zero = jarque_bera(flat);
    CHECK(zero.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(zero.p_value == doctest::Approx(1.0).epsilon(1e-12));

    // Null calibration, loose unit-level bounds (tight ones in acceptance).
    int reject = 0;
    for (int i = 0; i < 200; ++i) {
        RngStream rng(600, i);
        std::vector<double> z(1000);
        for (double& v : z) v = rng.normal();
        reject += jarque_bera(z).p_value < 0.05;
    }
    CHECK(reject >= 2);
    CHECK(reject <= 24);

    // Skewed semi-heavy-tailed alternative: overwhelming rejection.
    CHECK(jarque_bera(nig_draws(kSimLaw, 10000, 9)).p_value < 1e-3);

    std::vector<double> c(20, 1.0);
    CHECK_THROWS_AS(jarque_bera(c), ZeroVarianceError);
    std::vector<double> tiny{1.0, 2.0};
    CHECK_THROWS_AS(jarque_bera(tiny), TooShortError);
}

TEST_CASE("ks_normality") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        RngStream rng(seed);
        std::vector<double> z(10000);
        for (double& v : z) v = 2.0 * rng.normal() + 5.0;
        CHECK(ks_normality(z).p_value > 0.01);
    }
    // The near-unit-root residual regime is grossly non-normal.
    CHECK(ks_normality(nig_draws(NigParams(0.02, 0.0, 0.23, 9.5), 10000, 16))
              .p_value < 0.01);

    std::vector<double> c(30, 2.0);
    CHECK_THROWS_AS(ks_normality(c), ZeroVarianceError);
}

TEST_CASE("ks_gof_normal calibration against a fixed reference") {
    int reject = 0;
    for (int i = 0; i < 200; ++i) {
        RngStream rng(700, i);
        std::vector<double> z(500);
        for (double& v : z) v = rng.normal();
        reject += ks_gof_normal(z, 0.0, 1.0).p_value < 0.05;
    }
    CHECK(reject >= 2);
    CHECK(reject <= 24);
}

TEST_CASE("qq_points") {
    const std::vector<double> a{3.0, 1.0, 2.0, 0.5};
    const auto diag = qq_points(a, a);
    for (const auto& [qa, qb] : diag) CHECK(qa == qb);

    std::vector<double> b2(a);
    for (double& v : b2) v *= 2.0;
    for (const auto& [qa, qb] : qq_points(b2, a))
        CHECK(qa == doctest::Approx(2.0 * qb).epsilon(1e-14));

    // Interpolated quantiles of the larger sample, hand-computed.
    const std::vector<double> small{1.0, 2.0, 3.0};
    const std::vector<double> large{10.0, 20.0, 30.0, 40.0};
    const auto pts = qq_points(small, large);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].first == 1.0);
    CHECK(pts[0].second == doctest::Approx(35.0 / 3.0).epsilon(1e-14));
    CHECK(pts[1].second == doctest::Approx(25.0).epsilon(1e-14));
    CHECK(pts[2].second == doctest::Approx(115.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("histogram") {
    const std::vector<double> v{0.0, 0.1, 0.9, 1.0, 0.5};
    const Histogram h = histogram(v, 2);
    REQUIRE(h.edges.size() == 3);
    REQUIRE(h.counts.size() == 2);
    CHECK(h.counts[0] + h.counts[1] == v.size());
}

TEST_CASE("replication_study") {
    const NigArModel truth{0.5, kSimLaw};
    EmConfig cfg;
    cfg.tolerance = 1e-4;

    const ReplicationSummary two = replication_study(truth, 400, 2, cfg, 42);
    CHECK(two.requested == 2);
    CHECK(two.completed == 2);
    CHECK(two.alpha.q1 <= two.alpha.median);
    CHECK(two.alpha.median <= two.alpha.q3);

    // Determinism, independent of the thread count.
    const ReplicationSummary a = replication_study(truth, 400, 6, cfg, 7, 1);
    const ReplicationSummary b = replication_study(truth, 400, 6, cfg, 7, 4);
    REQUIRE(a.estimates.alpha.size() == b.estimates.alpha.size());
    for (std::size_t i = 0; i < a.estimates.alpha.size(); ++i) {
        CHECK(a.estimates.alpha[i] == b.estimates.alpha[i]);
        CHECK(a.estimates.rho[i] == b.estimates.rho[i]);
    }

    CHECK_THROWS_AS(replication_study(truth, 400, 1, cfg, 1),
                    std::invalid_argument);
}
