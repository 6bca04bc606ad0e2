#include "nigar/estimation.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "nigar/errors.hpp"
#include "support/oracles.hpp"

using namespace nigar;

namespace {
const NigParams kSimLaw(2.24, 1.0, 1.0, 2.0);

TimeSeries series(std::vector<double> v) {
    TimeSeries y;
    y.values = std::move(v);
    return y;
}

TimeSeries sim(const NigArModel& m, std::size_t n, std::uint64_t seed,
               std::uint64_t stream = 0) {
    RngStream rng(seed, stream);
    return simulate_path(m, n, rng);
}
}  // namespace

TEST_CASE("cls_rho") {
    CHECK_THROWS_AS(cls_rho(series({3.0, 3.0, 3.0, 3.0})),
                    ConstantSeriesError);
    CHECK_THROWS_AS(cls_rho(series({1.0, 2.0})), TooShortError);
    CHECK(cls_rho(series({0.0, 1.0, 0.0, 1.0})) == -1.0);

    const TimeSeries y = sim(NigArModel{0.5, kSimLaw}, 10000, 321);
    CHECK(cls_rho(y) == doctest::Approx(0.5).epsilon(0.03 / 0.5));
}

TEST_CASE("e_step") {
    const NigParams p(1.3, 0.4, 0.6, 1.1);

    // Residuals pinned at mu: constant moment sequences.
    std::vector<double> eps(16, p.mu), s, w;
    e_step(eps, p, s, w);
    REQUIRE(s.size() == eps.size());
    for (std::size_t t = 1; t < s.size(); ++t) {
        CHECK(s[t] == s[0]);
        CHECK(w[t] == w[0]);
    }

    // Length-1 consistency with the pointwise moments.
    std::vector<double> one{2.7};
    e_step(one, p, s, w);
    const CondMoments m = gig_cond_moments(2.7, p);
    CHECK(s[0] == m.s);
    CHECK(w[0] == m.w);
}

TEST_CASE("e_step tower property: mean of s estimates E[G]") {
    const NigArModel m{0.5, kSimLaw};
    const TimeSeries y = sim(m, 10001, 99);
    const std::vector<double> eps = residuals(y, m.rho);
    std::vector<double> s, w;
    e_step(eps, kSimLaw, s, w);
    const double eg = kSimLaw.delta / kSimLaw.gamma();  // 0.99781
    CHECK(oracle::mean(s) == doctest::Approx(eg).epsilon(0.01));
}

TEST_CASE("m_step_joint solves the score equations") {
    const TimeSeries y = sim(NigArModel{0.5, kSimLaw}, 400, 7);
    std::vector<double> eps = residuals(y, 0.45);
    std::vector<double> s, w;
    e_step(eps, kSimLaw, s, w);

    const NigArModel next = m_step_joint(y, s, w);
    const std::vector<double> score = detail::q_score(y, next, s, w);
    const double n = static_cast<double>(s.size());
    for (double g : score) CHECK(std::fabs(g) / n < 1e-6);

    // Degenerate weights: all s = w = 1 makes the delta update undefined.
    std::vector<double> ones(y.size() - 1, 1.0);
    CHECK_THROWS_AS(m_step_joint(y, ones, ones), DegenerateWeightsError);
}

TEST_CASE("m_step_joint matches an independent Cramer solve") {
    // Small synthetic case solved independently via Cramer determinants.
    const TimeSeries y = series({0.0, 1.0, 2.0, 0.5, 1.5});
    const std::vector<double> s{2.0, 1.5, 2.5, 1.8};
    const std::vector<double> w{1.0, 1.1, 0.7, 0.9};

    double T = 0, P = 0, R = 0, Q = 0, S = 0, U = 0, V = 0, W = 0;
    const double m = 4.0;
    for (std::size_t t = 0; t < 4; ++t) {
        const double yl = y.values[t], yc = y.values[t + 1];
        T += w[t] * yl * yl;
        P += w[t] * yl;
        R += yl;
        Q += w[t];
        S += s[t];
        U += w[t] * yc * yl;
        V += w[t] * yc;
        W += yc;
    }
    auto det3 = [](double a, double b, double c, double d, double e, double f,
                   double g, double h, double i) {
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    };
    const double den = det3(T, P, R, P, Q, m, R, m, S);
    const double rho = det3(U, P, R, V, Q, m, W, m, S) / den;
    const double mu = det3(T, U, R, P, V, m, R, W, S) / den;
    const double beta = det3(T, P, U, P, Q, V, R, m, W) / den;

    const NigArModel got = m_step_joint(y, s, w);
    CHECK(got.rho == doctest::Approx(rho).epsilon(1e-12));
    CHECK(got.innov.mu == doctest::Approx(mu).epsilon(1e-12));
    CHECK(got.innov.beta == doctest::Approx(beta).epsilon(1e-12));

    const double sbar = S / m, wbar = Q / m;
    CHECK(got.innov.delta ==
          doctest::Approx(std::sqrt(sbar / (sbar * wbar - 1.0)))
              .epsilon(1e-14));
}

TEST_CASE("literal closed forms agree with the linear solve") {
    const TimeSeries y = sim(NigArModel{0.6, kSimLaw}, 1200, 13);
    std::vector<double> eps = residuals(y, 0.55);
    std::vector<double> s, w;
    e_step(eps, kSimLaw, s, w);
    const NigArModel solved = m_step_joint(y, s, w);
    const NigArModel literal = detail::m_step_joint_literal(y, s, w);
    CHECK(solved.rho == doctest::Approx(literal.rho).epsilon(1e-10));
    CHECK(solved.innov.mu == doctest::Approx(literal.innov.mu).epsilon(1e-10));
    CHECK(solved.innov.beta ==
          doctest::Approx(literal.innov.beta).epsilon(1e-10));
    CHECK(solved.innov.delta ==
          doctest::Approx(literal.innov.delta).epsilon(1e-12));
}

TEST_CASE("m_step_two_stage") {
    const TimeSeries y = sim(NigArModel{0.5, kSimLaw}, 600, 23);
    const double rho = cls_rho(y);
    std::vector<double> eps = residuals(y, rho);
    std::vector<double> s, w;
    e_step(eps, kSimLaw, s, w);

    const NigArModel next = m_step_two_stage(y, rho, s, w);
    CHECK(next.rho == rho);
    // With rho fixed, (mu, beta) satisfy the mu- and beta-score equations.
    const std::vector<double> score = detail::q_score(y, next, s, w);
    const double n = static_cast<double>(s.size());
    CHECK(std::fabs(score[1]) / n < 1e-8);
    CHECK(std::fabs(score[2]) / n < 1e-8);

    // Constant w collapses the beta estimate to zero for any series.
    std::vector<double> wc(y.size() - 1, 0.8);
    std::vector<double> sc(y.size() - 1, 2.0);
    const NigArModel collapsed = m_step_two_stage(y, rho, sc, wc);
    CHECK(std::fabs(collapsed.innov.beta) < 1e-10);
}

TEST_CASE("log_likelihood") {
    const NigParams p(1.0, 0.2, 0.0, 1.0);
    CHECK(log_likelihood(std::vector<double>{}, p) == 0.0);
    CHECK(log_likelihood(std::vector<double>{0.3}, p) == nig_logpdf(0.3, p));

    // Against the quadrature-backed oracle for the Bessel factor.
    const TimeSeries y = sim(NigArModel{0.5, kSimLaw}, 101, 3);
    const std::vector<double> eps = residuals(y, 0.5);
    double ref = 0.0;
    const double g = kSimLaw.gamma();
    for (double e : eps) {
        const double phi = nig_phi(e, kSimLaw);
        const double om = kSimLaw.delta * kSimLaw.alpha * std::sqrt(phi);
        ref += std::log(kSimLaw.alpha / M_PI) + kSimLaw.delta * g -
               kSimLaw.beta * kSimLaw.mu - 0.5 * std::log(phi) +
               oracle::log_bessel_k(1, om) + kSimLaw.beta * e;
    }
    const double got = log_likelihood(eps, kSimLaw);
    CHECK(std::fabs(got - ref) / std::fabs(ref) < 1e-8);
}

TEST_CASE("init_method_of_moments") {
    RngStream rng(55);
    std::vector<double> z(100000);
    for (double& v : z) v = rng.normal();
    const NigParams p0 = init_method_of_moments(z);
    CHECK(p0.beta == 0.0);
    CHECK(std::fabs(p0.mu) < 0.02);
    CHECK(p0.delta / p0.gamma() == doctest::Approx(1.0).epsilon(0.05));
    CHECK(p0.alpha == p0.gamma());

    std::vector<double> c(32, 4.2);
    CHECK_THROWS_AS(init_method_of_moments(c), ZeroVarianceError);
    std::vector<double> three{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(init_method_of_moments(three), TooShortError);
}

TEST_CASE("em_fit determinism and monotone log-likelihood") {
    const TimeSeries y = sim(NigArModel{0.5, kSimLaw}, 2000, 71);
    EmConfig cfg;
    cfg.mode = EmMode::Joint;
    cfg.criterion = StopCriterion::LogLikRelChange;

    const FitReport a = em_fit(y, cfg);
    const FitReport b = em_fit(y, cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].log_likelihood == b.trace[i].log_likelihood);
        CHECK(a.trace[i].params.innov.alpha == b.trace[i].params.innov.alpha);
        CHECK(a.trace[i].params.rho == b.trace[i].params.rho);
    }
    for (std::size_t i = 1; i < a.trace.size(); ++i)
        CHECK(a.trace[i].log_likelihood >=
              a.trace[i - 1].log_likelihood - 1e-9);
    CHECK(a.stop_reason == StopReason::Converged);
}

TEST_CASE("em_fit recovers the simulation-study design parameters") {
    const TimeSeries y = sim(NigArModel{0.5, kSimLaw}, 10000, 1000);
    EmConfig cfg;
    cfg.mode = EmMode::Joint;
    cfg.init = NigArModel{0.5, NigParams(1.8, 0.0, 1.0, 2.0)};
    const FitReport fit = em_fit(y, cfg);
    CHECK(fit.params.innov.alpha == doctest::Approx(2.091).epsilon(0.25 / 2.091));
    CHECK(fit.params.innov.beta == doctest::Approx(0.892).epsilon(0.25 / 0.892));
    CHECK(fit.params.innov.mu == doctest::Approx(1.042).epsilon(0.25 / 1.042));
    CHECK(fit.params.innov.delta == doctest::Approx(1.962).epsilon(0.25 / 1.962));
    CHECK(fit.params.rho == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("em_fit two-stage keeps the CLS rho fixed") {
    const TimeSeries y = sim(NigArModel{0.5, kSimLaw}, 4000, 5);
    const double rho = cls_rho(y);
    EmConfig cfg;
    cfg.mode = EmMode::TwoStage;
    const FitReport fit = em_fit(y, cfg);
    CHECK(fit.params.rho == rho);
    for (const TracePoint& t : fit.trace) CHECK(t.params.rho == rho);
    CHECK(fit.mode_used == EmMode::TwoStage);
}

TEST_CASE("em_fit on a tiny series returns without crashing") {
    const TimeSeries y = series({0.13, -0.27, 0.31});
    const FitReport fit = em_fit(y);
    CHECK(std::isfinite(fit.params.innov.alpha));
    CHECK(std::isfinite(fit.params.innov.delta));
    CHECK((fit.stop_reason == StopReason::Converged ||
           fit.stop_reason == StopReason::MaxIterations));
}

TEST_CASE("em_fit signals a non-finite likelihood") {
    TimeSeries y;
    y.values.assign(64, 0.0);
    RngStream rng(8);
    for (double& v : y.values) v = rng.normal();
    y.values[30] = 1e160;  // phi overflows, the log-density hits -inf
    EmConfig cfg;
    cfg.init = NigArModel{0.0, NigParams(1.0, 0.0, 0.0, 1.0)};
    CHECK_THROWS_AS(em_fit(y, cfg), NonFiniteLikelihoodError);
}

TEST_CASE("em_fit basin: moment init and a distant guess meet") {
    const TimeSeries y = sim(NigArModel{0.0, kSimLaw}, 10000, 2024);
    EmConfig cfg;
    cfg.mode = EmMode::Joint;
    cfg.criterion = StopCriterion::ParamRelChange;
    cfg.tolerance = 1e-7;
    cfg.max_iterations = 20000;

    const FitReport from_mom = em_fit(y, cfg);
    EmConfig cfg2 = cfg;
    cfg2.init = NigArModel{0.0, NigParams(0.1, 0.01, 0.01, 0.1)};
    const FitReport from_guess = em_fit(y, cfg2);

    CHECK(from_mom.params.innov.alpha ==
          doctest::Approx(from_guess.params.innov.alpha).epsilon(1e-3));
    CHECK(from_mom.params.innov.beta ==
          doctest::Approx(from_guess.params.innov.beta).epsilon(1e-3));
    CHECK(from_mom.params.innov.mu ==
          doctest::Approx(from_guess.params.innov.mu).epsilon(1e-3));
    CHECK(from_mom.params.innov.delta ==
          doctest::Approx(from_guess.params.innov.delta).epsilon(1e-3));
}

TEST_CASE("em_fit criterion 2 stops on parameter changes") {
    const TimeSeries y = sim(NigArModel{0.5, kSimLaw}, 2000, 3001);
    EmConfig cfg;
    cfg.criterion = StopCriterion::ParamRelChange;
    cfg.mode = EmMode::TwoStage;
    const FitReport fit = em_fit(y, cfg);
    CHECK(fit.criterion_used == StopCriterion::ParamRelChange);
    if (fit.stop_reason == StopReason::Converged) {
        // Last two trace points differ by less than tol in every parameter.
        const auto& a = fit.trace[fit.trace.size() - 2].params.innov;
        const auto& b = fit.trace.back().params.innov;
        CHECK(std::fabs(b.alpha - a.alpha) / a.alpha < cfg.tolerance);
        CHECK(std::fabs(b.delta - a.delta) / a.delta < cfg.tolerance);
    }
}
