#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nigar/estimation.hpp"
#include "nigar/model.hpp"

namespace nigar {

struct CorrelogramPoint {
    std::size_t lag;
    double value;
    double conf_band;  // +-1.96/sqrt(n)
};

struct TestResult {
    double statistic;
    double p_value;
    std::string test_name;
};

// Box-plot summary of one parameter across replicates.
struct FiveNumber {
    double min;
    double q1;
    double median;
    double q3;
    double max;
    double lo_fence;  // q1 - 1.5 IQR
    double hi_fence;  // q3 + 1.5 IQR
};

struct ParamDraws {
    std::vector<double> alpha, beta, mu, delta, gamma, rho;
};

struct ReplicationSummary {
    std::size_t requested = 0;
    std::size_t completed = 0;
    std::size_t failed = 0;
    ParamDraws estimates;
    FiveNumber alpha, beta, mu, delta, gamma, rho;
};

// Autocorrelations r_k = c_k / c_0 with biased-normalization
// autocovariances about the sample mean; point at lag 0 is exactly 1.
std::vector<CorrelogramPoint> acf(const TimeSeries& y, std::size_t max_lag);

// Partial autocorrelations via the Durbin-Levinson recursion over the acf;
// the lag-0 point is reported as the definitional 1.
std::vector<CorrelogramPoint> pacf(const TimeSeries& y, std::size_t max_lag);

// Two-sample Kolmogorov-Smirnov: sup distance of the empirical CDFs,
// asymptotic p-value at sqrt(na*nb/(na+nb)) * D.
TestResult ks_2sample(std::span<const double> a, std::span<const double> b);

// One-sample KS of the internally standardized sample against the standard
// normal CDF. The p-value is the plain asymptotic one and is conservative
// because mean and standard deviation are estimated from the sample.
TestResult ks_normality(std::span<const double> a);

// One-sample KS against a fully specified normal reference.
TestResult ks_gof_normal(std::span<const double> a, double mean, double sd);

// Jarque-Bera: (n/6) (S^2 + (K-3)^2/4) against chi-square(2).
TestResult jarque_bera(std::span<const double> a);

// Order statistics of the smaller sample paired with interpolated
// empirical quantiles of the larger; returns (quantile_a, quantile_b).
std::vector<std::pair<double, double>> qq_points(std::span<const double> a,
                                                 std::span<const double> b);

// Empirical quantile with plotting positions (i - 0.5)/n and linear
// interpolation; data must be sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

// Simulate-then-fit study: replicate r simulates with RngStream(seed, r)
// and fits with cfg. Replicate failures are counted and excluded.
// Deterministic for fixed seed regardless of thread count.
ReplicationSummary replication_study(const NigArModel& truth, std::size_t n,
                                     std::size_t reps, const EmConfig& cfg,
                                     std::uint64_t seed,
                                     unsigned threads = 0);

// Asymptotic Kolmogorov survival function Q(lambda), truncated at 100
// terms; result clamped to [1e-16, 1] so vanishing p-values keep their
// magnitude.
double kolmogorov_q(double lambda);

struct Histogram {
    std::vector<double> edges;   // size bins + 1
    std::vector<std::size_t> counts;
};

Histogram histogram(std::span<const double> a, std::size_t bins);

}  // namespace nigar
