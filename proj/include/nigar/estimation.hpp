#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nigar/model.hpp"

namespace nigar {

enum class StopCriterion {
    LogLikRelChange,  // |(L_k - L_{k+1}) / L_k| < tolerance
    ParamRelChange    // max relative change over (alpha,beta,mu,gamma,delta)
};

enum class EmMode {
    Joint,    // rho re-estimated each M-step from the score equations
    TwoStage  // rho fixed at the conditional-least-squares estimate
};

enum class StopReason { Converged, MaxIterations };

struct EmConfig {
    std::size_t max_iterations = 2000;
    double tolerance = 1e-5;
    StopCriterion criterion = StopCriterion::LogLikRelChange;
    EmMode mode = EmMode::Joint;
    // Explicit start; method-of-moments on the CLS residuals when absent.
    std::optional<NigArModel> init;
};

struct TracePoint {
    std::size_t iteration;
    NigArModel params;
    double log_likelihood;
};

struct FitReport {
    NigArModel params;
    std::vector<TracePoint> trace;
    StopReason stop_reason;
    StopCriterion criterion_used;
    EmMode mode_used;
};

// Lag-1 least-squares coefficient about the full-sample mean:
//   sum_{t<n-1} (y_t - ybar)(y_{t+1} - ybar) / sum_{t<n-1} (y_t - ybar)^2.
// Throws TooShortError (< 3 points) or ConstantSeriesError.
double cls_rho(const TimeSeries& y);

// Elementwise conditional moments of the mixing variable over residuals.
void e_step(std::span<const double> eps, const NigParams& p,
            std::vector<double>& s, std::vector<double>& w);

// Joint M-step: solves the 3x3 linear score system for (rho, mu, beta) and
// applies the closed forms delta = sqrt(sbar/(sbar*wbar - 1)),
// gamma = delta/sbar, alpha = sqrt(gamma^2 + beta^2).
NigArModel m_step_joint(const TimeSeries& y, std::span<const double> s,
                        std::span<const double> w);

// Two-stage M-step: rho held fixed, (beta, mu) from the closed forms, then
// the same delta/gamma/alpha updates.
NigArModel m_step_two_stage(const TimeSeries& y, double rho_hat,
                            std::span<const double> s,
                            std::span<const double> w);

// Observed-data log-likelihood: sum of nig_logpdf over the residuals.
double log_likelihood(std::span<const double> eps, const NigParams& p);

// Symmetric moment-matched start: beta = 0, mu = sample mean,
// delta/gamma = sample variance, 3/(delta*gamma) = excess kurtosis
// (floored at 0.1), alpha = gamma.
NigParams init_method_of_moments(std::span<const double> eps);

// EM driver. Trace entry 0 is the initialization; the observed-data
// log-likelihood is non-decreasing along the trace.
FitReport em_fit(const TimeSeries& y, const EmConfig& cfg = {});

namespace detail {
// Literal transcription of the typeset closed forms for the joint update
// (Cramer expansion of the score system); kept for cross-checking the
// linear solve.
NigArModel m_step_joint_literal(const TimeSeries& y,
                                std::span<const double> s,
                                std::span<const double> w);

// Partial derivatives of the Q function at (model, s, w), in the order
// (rho, mu, beta, delta, gamma); used by tests to verify stationarity.
std::vector<double> q_score(const TimeSeries& y, const NigArModel& model,
                            std::span<const double> s,
                            std::span<const double> w);
}  // namespace detail

}  // namespace nigar
