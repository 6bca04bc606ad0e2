#include "nigar/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nigar/errors.hpp"

namespace nigar {

TimeSeries simulate_path(const NigArModel& m, std::size_t n, RngStream& rng,
                         const SimulateOptions& opts) {
    if (n == 0) throw std::invalid_argument("simulate_path: n must be >= 1");

    double prev = 0.0;
    bool have_prev = false;
    if (opts.stationary_start) {
        const double r = std::fabs(m.rho);
        if (!(r < 1.0))
            throw std::invalid_argument(
                "simulate_path: stationary start needs |rho| < 1");
        // Warm up until rho^B is negligible against double precision.
        std::size_t burn = 1;
        if (r > 0.0)
            burn = static_cast<std::size_t>(
                std::ceil(std::log(1e-14) / std::log(r)));
        prev = nig_sample(m.innov, rng);
        for (std::size_t i = 0; i < burn; ++i)
            prev = m.rho * prev + nig_sample(m.innov, rng);
        have_prev = true;
    }

    TimeSeries out;
    out.values.reserve(n);
    if (opts.innovations) {
        opts.innovations->clear();
        opts.innovations->reserve(n);
    }
    for (std::size_t t = 0; t < n; ++t) {
        const double eps = nig_sample(m.innov, rng);
        double y;
        if (t == 0 && !have_prev) {
            y = eps;
        } else {
            y = m.rho * prev + eps;
        }
        if (opts.innovations) {
            // Record the innovation as the path realizes it so the
            // residual recomputation matches bit for bit.
            const double realized =
                (t == 0 && !have_prev) ? y : detail::lag_residual(y, prev, m.rho);
            opts.innovations->push_back(realized);
        }
        out.values.push_back(y);
        prev = y;
    }
    return out;
}

std::vector<double> residuals(const TimeSeries& y, double rho) {
    if (y.size() < 2)
        throw TooShortError("residuals: need at least 2 observations, got " +
                            std::to_string(y.size()));
    std::vector<double> eps(y.size() - 1);
    for (std::size_t t = 1; t < y.size(); ++t)
        eps[t - 1] = detail::lag_residual(y.values[t], y.values[t - 1], rho);
    return eps;
}

Moments theoretical_moments(const NigArModel& m, std::size_t t) {
    if (std::fabs(m.rho) == 1.0)
        throw std::invalid_argument("theoretical_moments: |rho| must differ "
                                    "from 1");
    const Moments e = nig_moments(m.innov);
    const double k = static_cast<double>(t) + 1.0;
    Moments out;
    out.mean = e.mean * (1.0 - std::pow(m.rho, k)) / (1.0 - m.rho);
    const double r2 = m.rho * m.rho;
    out.variance = e.variance * (1.0 - std::pow(r2, k)) / (1.0 - r2);
    return out;
}

}  // namespace nigar
