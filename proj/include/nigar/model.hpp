#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nigar/distributions.hpp"

namespace nigar {

// Ordered observations with optional date labels (same length when present).
struct TimeSeries {
    std::vector<double> values;
    std::vector<std::string> labels;

    std::size_t size() const { return values.size(); }
};

// y_t = rho * y_{t-1} + eps_t with iid NIG innovations.
struct NigArModel {
    double rho;
    NigParams innov;
};

struct SimulateOptions {
    // When set, the path starts from (approximate) stationarity via a
    // warm-up run instead of y_0 = eps_0. Requires |rho| < 1.
    bool stationary_start = false;
    // When non-null, receives the innovations as realized in the path, so
    // residuals(path, rho) reproduces them bit-exactly.
    std::vector<double>* innovations = nullptr;
};

// Path of length n: y_0 = eps_0, y_t = rho*y_{t-1} + eps_t.
TimeSeries simulate_path(const NigArModel& m, std::size_t n, RngStream& rng,
                         const SimulateOptions& opts = {});

// eps_t = y_t - rho*y_{t-1} for t = 1..n-1; length(y) - 1 values.
std::vector<double> residuals(const TimeSeries& y, double rho);

// Mean and variance of Y_t under the model with y_0 = eps_0:
//   E(Y_t)  = E(eps) (1 - rho^{t+1}) / (1 - rho)
//   Var(Y_t) = Var(eps) (1 - rho^{2(t+1)}) / (1 - rho^2)
// (the geometric sums implied by the AR recursion). Rejects |rho| = 1.
Moments theoretical_moments(const NigArModel& m, std::size_t t);

namespace detail {
// Shared residual expression so the simulator's recorded innovations and
// residuals() round identically.
inline double lag_residual(double y_t, double y_prev, double rho) {
    return y_t - rho * y_prev;
}
}  // namespace detail

}  // namespace nigar
