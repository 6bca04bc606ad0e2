#include "nigar/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "nigar/errors.hpp"

namespace nigar {

namespace {

double sample_mean(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v;
    return s / static_cast<double>(a.size());
}

double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

// Sup distance of the standardized empirical CDF against the standard
// normal; data already transformed to z-scores (or raw for a N(0,1) ref).
double ks_stat_vs_normal(std::vector<double> z) {
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double f = std_normal_cdf(z[i]);
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return d;
}

FiveNumber five_number(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    FiveNumber f;
    f.min = v.front();
    f.max = v.back();
    f.q1 = quantile_sorted(v, 0.25);
    f.median = quantile_sorted(v, 0.5);
    f.q3 = quantile_sorted(v, 0.75);
    const double iqr = f.q3 - f.q1;
    f.lo_fence = f.q1 - 1.5 * iqr;
    f.hi_fence = f.q3 + 1.5 * iqr;
    return f;
}

}  // namespace

double kolmogorov_q(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 1e-16, 1.0);
}

std::vector<CorrelogramPoint> acf(const TimeSeries& y, std::size_t max_lag) {
    const std::size_t n = y.size();
    if (max_lag >= n)
        throw std::invalid_argument("acf: max_lag must be < length(y)");
    const double mean = sample_mean(y.values);
    double c0 = 0.0;
    for (double v : y.values) c0 += (v - mean) * (v - mean);
    c0 /= static_cast<double>(n);
    const double scale = std::max(std::fabs(mean), 1e-300);
    if (!(c0 > 1e-28 * scale * scale))
        throw ConstantSeriesError("acf: constant series");
    const double band = 1.96 / std::sqrt(static_cast<double>(n));
    std::vector<CorrelogramPoint> out;
    out.reserve(max_lag + 1);
    out.push_back({0, 1.0, band});
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = k; t < n; ++t)
            ck += (y.values[t] - mean) * (y.values[t - k] - mean);
        ck /= static_cast<double>(n);
        out.push_back({k, ck / c0, band});
    }
    return out;
}

std::vector<CorrelogramPoint> pacf(const TimeSeries& y, std::size_t max_lag) {
    const std::vector<CorrelogramPoint> r = acf(y, max_lag);
    std::vector<CorrelogramPoint> out;
    out.reserve(max_lag + 1);
    out.push_back({0, 1.0, r[0].conf_band});
    if (max_lag == 0) return out;

    // Durbin-Levinson.
    std::vector<double> phi(max_lag + 1, 0.0), prev(max_lag + 1, 0.0);
    phi[1] = r[1].value;
    out.push_back({1, phi[1], r[0].conf_band});
    for (std::size_t k = 2; k <= max_lag; ++k) {
        prev = phi;
        double num = r[k].value;
        double den = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            num -= prev[j] * r[k - j].value;
            den -= prev[j] * r[j].value;
        }
        phi[k] = num / den;
        for (std::size_t j = 1; j < k; ++j)
            phi[j] = prev[j] - phi[k] * prev[k - j];
        out.push_back({k, phi[k], r[0].conf_band});
    }
    return out;
}

TestResult ks_2sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_2sample: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_q(ne * d), "ks_2sample"};
}

TestResult ks_gof_normal(std::span<const double> a, double mean, double sd) {
    if (a.size() < 8)
        throw TooShortError("ks_gof_normal: need at least 8 observations");
    if (!(sd > 0.0)) throw ZeroVarianceError("ks_gof_normal: sd must be > 0");
    std::vector<double> z(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) z[i] = (a[i] - mean) / sd;
    const double d = ks_stat_vs_normal(std::move(z));
    const double lambda = std::sqrt(static_cast<double>(a.size())) * d;
    return {d, kolmogorov_q(lambda), "ks_gof_normal"};
}

TestResult ks_normality(std::span<const double> a) {
    if (a.size() < 8)
        throw TooShortError("ks_normality: need at least 8 observations");
    const double mean = sample_mean(a);
    double ss = 0.0;
    for (double v : a) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(a.size() - 1));
    if (sd == 0.0) throw ZeroVarianceError("ks_normality: zero variance");
    TestResult r = ks_gof_normal(a, mean, sd);
    r.test_name = "ks_normality";
    return r;
}

TestResult jarque_bera(std::span<const double> a) {
    const std::size_t n = a.size();
    if (n < 8)
        throw TooShortError("jarque_bera: need at least 8 observations");
    const double mean = sample_mean(a);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : a) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double dn = static_cast<double>(n);
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    if (m2 == 0.0) throw ZeroVarianceError("jarque_bera: zero variance");
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    const double jb =
        dn / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
    // chi-square(2) survival function is exp(-x/2).
    const double p = std::clamp(std::exp(-0.5 * jb), 1e-16, 1.0);
    return {jb, p, "jarque_bera"};
}

double quantile_sorted(std::span<const double> sorted, double p) {
    const double n = static_cast<double>(sorted.size());
    const double pos = p * n - 0.5;  // inverse of (i - 0.5)/n
    if (pos <= 0.0) return sorted.front();
    if (pos >= n - 1.0) return sorted.back();
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> a,
                                                 std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("qq_points: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const bool a_small = sa.size() <= sb.size();
    const std::vector<double>& small = a_small ? sa : sb;
    const std::vector<double>& large = a_small ? sb : sa;
    std::vector<std::pair<double, double>> out;
    out.reserve(small.size());
    const double m = static_cast<double>(small.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) / m;
        const double q = quantile_sorted(large, p);
        if (a_small)
            out.emplace_back(small[i], q);
        else
            out.emplace_back(q, small[i]);
    }
    return out;
}

Histogram histogram(std::span<const double> a, std::size_t bins) {
    if (a.empty() || bins == 0)
        throw std::invalid_argument("histogram: empty input");
    const auto [lo_it, hi_it] = std::minmax_element(a.begin(), a.end());
    double lo = *lo_it, hi = *hi_it;
    if (lo == hi) hi = lo + 1.0;
    Histogram h;
    h.edges.resize(bins + 1);
    h.counts.assign(bins, 0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i)
        h.edges[i] = lo + width * static_cast<double>(i);
    for (double v : a) {
        std::size_t idx = static_cast<std::size_t>((v - lo) / width);
        if (idx >= bins) idx = bins - 1;
        ++h.counts[idx];
    }
    return h;
}

ReplicationSummary replication_study(const NigArModel& truth, std::size_t n,
                                     std::size_t reps, const EmConfig& cfg,
                                     std::uint64_t seed, unsigned threads) {
    if (reps < 2)
        throw std::invalid_argument("replication_study: reps must be >= 2");

    struct Slot {
        bool ok = false;
        double alpha = 0, beta = 0, mu = 0, delta = 0, gamma = 0, rho = 0;
    };
    std::vector<Slot> slots(reps);

    auto run_one = [&](std::size_t r) {
        RngStream rng(seed, r);
        try {
            const TimeSeries y = simulate_path(truth, n, rng);
            const FitReport fit = em_fit(y, cfg);
            Slot& s = slots[r];
            s.alpha = fit.params.innov.alpha;
            s.beta = fit.params.innov.beta;
            s.mu = fit.params.innov.mu;
            s.delta = fit.params.innov.delta;
            s.gamma = fit.params.innov.gamma();
            s.rho = fit.params.rho;
            s.ok = true;
        } catch (const Error&) {
            slots[r].ok = false;
        }
    };

    unsigned nthreads = threads != 0 ? threads
                                     : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(reps));
    if (nthreads <= 1) {
        for (std::size_t r = 0; r < reps; ++r) run_one(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (std::size_t r = next.fetch_add(1); r < reps;
                     r = next.fetch_add(1))
                    run_one(r);
            });
        for (auto& th : pool) th.join();
    }

    ReplicationSummary out;
    out.requested = reps;
    for (const Slot& s : slots) {
        if (!s.ok) {
            ++out.failed;
            continue;
        }
        ++out.completed;
        out.estimates.alpha.push_back(s.alpha);
        out.estimates.beta.push_back(s.beta);
        out.estimates.mu.push_back(s.mu);
        out.estimates.delta.push_back(s.delta);
        out.estimates.gamma.push_back(s.gamma);
        out.estimates.rho.push_back(s.rho);
    }
    if (out.completed < 2)
        throw Error("replication_study: fewer than 2 replicates succeeded");
    out.alpha = five_number(out.estimates.alpha);
    out.beta = five_number(out.estimates.beta);
    out.mu = five_number(out.estimates.mu);
    out.delta = five_number(out.estimates.delta);
    out.gamma = five_number(out.estimates.gamma);
    out.rho = five_number(out.estimates.rho);
    return out;
}

}  // namespace nigar
