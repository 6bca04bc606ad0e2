#include "nigar/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nigar/errors.hpp"

namespace nigar {

namespace {

// Sums entering the M-step score equations, over the m = n-1 residual
// indices t = 1..m with yc = y_t and yl = y_{t-1}.
struct ScoreSums {
    double m;   // residual count
    double T;   // sum w * yl^2
    double P;   // sum w * yl
    double R;   // sum yl
    double Q;   // sum w
    double S;   // sum s
    double U;   // sum w * yc * yl
    double V;   // sum w * yc
    double W;   // sum yc
};

ScoreSums score_sums(const TimeSeries& y, std::span<const double> s,
                     std::span<const double> w) {
    const std::size_t m = y.size() - 1;
    if (s.size() != m || w.size() != m)
        throw std::invalid_argument(
            "m_step: weight lengths must equal length(y) - 1");
    ScoreSums out{static_cast<double>(m), 0, 0, 0, 0, 0, 0, 0, 0};
    for (std::size_t t = 0; t < m; ++t) {
        const double yl = y.values[t];
        const double yc = y.values[t + 1];
        out.T += w[t] * yl * yl;
        out.P += w[t] * yl;
        out.R += yl;
        out.Q += w[t];
        out.S += s[t];
        out.U += w[t] * yc * yl;
        out.V += w[t] * yc;
        out.W += yc;
    }
    return out;
}

// delta/gamma/alpha closed forms shared by both M-step variants. Applies
// the one-shot gamma floor before giving up on a non-finite intermediate.
NigParams finish_params(double beta, double mu, const ScoreSums& z) {
    const double sbar = z.S / z.m;
    const double wbar = z.Q / z.m;
    if (!(sbar * wbar > 1.0))
        throw DegenerateWeightsError(
            "m_step: mean(s)*mean(w) <= 1, delta estimate undefined "
            "(mean(s)*mean(w) = " + std::to_string(sbar * wbar) + ")");
    const double delta = std::sqrt(sbar / (sbar * wbar - 1.0));
    double gamma = delta / sbar;
    if (!std::isfinite(gamma) || gamma <= 0.0)
        gamma = std::max(1e-8, 3e-8 * std::fabs(beta));
    const double alpha = std::hypot(gamma, beta);
    return NigParams(alpha, beta, mu, delta);
}

// 3x3 linear solve with partial pivoting.
void solve3(double a[3][4]) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0)
            throw Error("m_step: singular score system");
        if (piv != col)
            for (int c = 0; c < 4; ++c) std::swap(a[piv][c], a[col][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    for (int r = 0; r < 3; ++r) a[r][3] /= a[r][r];
}

NigParams moment_start(std::span<const double> eps, bool allow_short) {
    const std::size_t m = eps.size();
    if (!allow_short && m < 4)
        throw TooShortError("init_method_of_moments: need at least 4 "
                            "residuals, got " + std::to_string(m));
    if (m < 2)
        throw TooShortError("init: need at least 2 residuals");
    double mean = 0.0;
    for (double e : eps) mean += e;
    mean /= static_cast<double>(m);
    double m2 = 0.0, m4 = 0.0;
    for (double e : eps) {
        const double d = e - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(m);
    m4 /= static_cast<double>(m);
    // Constant up to rounding counts as zero variance.
    const double scale = std::max(std::fabs(mean), 1e-300);
    if (!(m2 > 1e-28 * scale * scale))
        throw ZeroVarianceError("init_method_of_moments: zero variance");
    double exkurt = m >= 4 ? m4 / (m2 * m2) - 3.0 : 0.1;
    exkurt = std::max(exkurt, 0.1);
    // delta/gamma = variance, delta*gamma = 3/exkurt.
    const double delta = std::sqrt(3.0 * m2 / exkurt);
    const double gamma = delta / m2;
    return NigParams(gamma, 0.0, mean, delta);
}

}  // namespace

double cls_rho(const TimeSeries& y) {
    const std::size_t n = y.size();
    if (n < 3)
        throw TooShortError("cls_rho: need at least 3 observations, got " +
                            std::to_string(n));
    double ybar = 0.0;
    for (double v : y.values) ybar += v;
    ybar /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        const double d0 = y.values[t] - ybar;
        const double d1 = y.values[t + 1] - ybar;
        num += d0 * d1;
        den += d0 * d0;
    }
    const double scale = std::max(std::fabs(ybar), 1e-300);
    if (!(den > static_cast<double>(n) * 1e-28 * scale * scale))
        throw ConstantSeriesError("cls_rho: constant series");
    return num / den;
}

void e_step(std::span<const double> eps, const NigParams& p,
            std::vector<double>& s, std::vector<double>& w) {
    s.resize(eps.size());
    w.resize(eps.size());
    for (std::size_t t = 0; t < eps.size(); ++t) {
        const CondMoments m = gig_cond_moments(eps[t], p);
        s[t] = m.s;
        w[t] = m.w;
    }
}

NigArModel m_step_joint(const TimeSeries& y, std::span<const double> s,
                        std::span<const double> w) {
    const ScoreSums z = score_sums(y, s, w);
    if (!(z.S * z.Q / (z.m * z.m) > 1.0))
        throw DegenerateWeightsError(
            "m_step_joint: mean(s)*mean(w) <= 1, delta estimate undefined");
    double a[3][4] = {{z.T, z.P, z.R, z.U},
                      {z.P, z.Q, z.m, z.V},
                      {z.R, z.m, z.S, z.W}};
    solve3(a);
    const double rho = a[0][3];
    const double mu = a[1][3];
    const double beta = a[2][3];
    if (!std::isfinite(rho) || !std::isfinite(mu) || !std::isfinite(beta))
        throw Error("m_step_joint: non-finite solution of the score system");
    return NigArModel{rho, finish_params(beta, mu, z)};
}

NigArModel m_step_two_stage(const TimeSeries& y, double rho_hat,
                            std::span<const double> s,
                            std::span<const double> w) {
    const ScoreSums z = score_sums(y, s, w);
    const double sbar = z.S / z.m;
    const double wbar = z.Q / z.m;
    const double ybar = z.W / z.m;
    const double denom = sbar * z.Q - z.m;
    if (denom == 0.0)
        throw DegenerateWeightsError("m_step_two_stage: degenerate weights "
                                     "(mean(s)*mean(w) = 1)");
    const double beta =
        (rho_hat * z.P - z.V + ybar * z.Q - rho_hat * wbar * z.R) / denom;
    const double mu = ybar - (rho_hat / z.m) * z.R - beta * sbar;
    return NigArModel{rho_hat, finish_params(beta, mu, z)};
}

double log_likelihood(std::span<const double> eps, const NigParams& p) {
    double sum = 0.0;
    for (double e : eps) sum += nig_logpdf(e, p);
    return sum;
}

NigParams init_method_of_moments(std::span<const double> eps) {
    return moment_start(eps, /*allow_short=*/false);
}

FitReport em_fit(const TimeSeries& y, const EmConfig& cfg) {
    if (y.size() < 3)
        throw TooShortError("em_fit: need at least 3 observations, got " +
                            std::to_string(y.size()));
    if (!(cfg.tolerance > 0.0) || cfg.max_iterations < 1)
        throw std::invalid_argument("em_fit: invalid config");

    const double rho_cls = cls_rho(y);
    double rho = rho_cls;
    if (cfg.mode == EmMode::Joint && cfg.init) rho = cfg.init->rho;

    std::vector<double> eps = residuals(y, rho);
    NigParams p = cfg.init ? cfg.init->innov
                           : moment_start(eps, /*allow_short=*/true);

    FitReport report{NigArModel{rho, p},
                     {},
                     StopReason::MaxIterations,
                     cfg.criterion,
                     cfg.mode};
    double loglik = log_likelihood(eps, p);
    if (!std::isfinite(loglik))
        throw NonFiniteLikelihoodError(
            "em_fit: non-finite log-likelihood at initialization");
    report.trace.push_back({0, NigArModel{rho, p}, loglik});

    std::vector<double> s, w;
    const double guard = 1e-300;
    for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
        e_step(eps, p, s, w);
        const NigArModel next = cfg.mode == EmMode::Joint
                                    ? m_step_joint(y, s, w)
                                    : m_step_two_stage(y, rho_cls, s, w);

        const double gamma_old = p.gamma();
        const double gamma_new = next.innov.gamma();
        const double rel_param = std::max(
            {std::fabs(next.innov.alpha - p.alpha) /
                 std::max(std::fabs(p.alpha), guard),
             std::fabs(next.innov.beta - p.beta) /
                 std::max(std::fabs(p.beta), guard),
             std::fabs(next.innov.mu - p.mu) / std::max(std::fabs(p.mu), guard),
             std::fabs(gamma_new - gamma_old) /
                 std::max(std::fabs(gamma_old), guard),
             std::fabs(next.innov.delta - p.delta) /
                 std::max(std::fabs(p.delta), guard)});

        rho = next.rho;
        p = next.innov;
        eps = residuals(y, rho);
        const double loglik_new = log_likelihood(eps, p);
        if (!std::isfinite(loglik_new))
            throw NonFiniteLikelihoodError(
                "em_fit: non-finite log-likelihood at iteration " +
                std::to_string(k) + " (last finite value " +
                std::to_string(loglik) + ")");
        report.trace.push_back({k, NigArModel{rho, p}, loglik_new});

        const double rel_loglik =
            std::fabs(loglik - loglik_new) / (std::fabs(loglik) + 1e-12);
        loglik = loglik_new;

        const double crit = cfg.criterion == StopCriterion::LogLikRelChange
                                ? rel_loglik
                                : rel_param;
        if (crit < cfg.tolerance) {
            report.stop_reason = StopReason::Converged;
            break;
        }
    }
    report.params = NigArModel{rho, p};
    return report;
}

namespace detail {

NigArModel m_step_joint_literal(const TimeSeries& y,
                                std::span<const double> s,
                                std::span<const double> w) {
    const ScoreSums z = score_sums(y, s, w);
    const double m = z.m;
    const double num = (m * z.U - z.V * z.R) * (z.S * z.Q - m * m) +
                       (m * z.P - z.Q * z.R) * (m * z.W - z.V * z.S);
    const double den = (m * z.P - z.Q * z.R) * (m * z.R - z.P * z.S) +
                       (m * z.T - z.P * z.R) * (z.S * z.Q - m * m);
    const double rho = num / den;
    const double mu =
        (m * z.U - z.V * z.R - rho * (m * z.T - z.P * z.R)) /
        (m * z.P - z.Q * z.R);
    const double beta = (z.V - rho * z.P - mu * z.Q) / m;
    return NigArModel{rho, finish_params(beta, mu, z)};
}

std::vector<double> q_score(const TimeSeries& y, const NigArModel& model,
                            std::span<const double> s,
                            std::span<const double> w) {
    const ScoreSums z = score_sums(y, s, w);
    const double rho = model.rho;
    const double mu = model.innov.mu;
    const double beta = model.innov.beta;
    const double delta = model.innov.delta;
    const double gamma = model.innov.gamma();
    return {
        z.U - beta * z.R - mu * z.P - rho * z.T,
        -z.m * beta + z.V - mu * z.Q - rho * z.P,
        -z.m * mu + z.W - beta * z.S - rho * z.R,
        z.m * gamma + z.m / delta - delta * z.Q,
        z.m * delta - gamma * z.S,
    };
}

}  // namespace detail

}  // namespace nigar
