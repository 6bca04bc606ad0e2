// Command-line front end: CSV ingestion, model fitting, simulation,
// diagnostics, and the simulate-then-fit replication study.
//
// Exit codes: 0 success, 1 usage/input error, 2 fit did not converge.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nigar/diagnostics.hpp"
#include "nigar/errors.hpp"
#include "nigar/estimation.hpp"
#include "nigar/io.hpp"
#include "nigar/model.hpp"

using nlohmann::json;

namespace {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("NIGAR_LOG");
        if (env == nullptr) return LogLevel::Info;
        const std::string v(env);
        if (v == "error") return LogLevel::Error;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Info;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "[nigar] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug)
        std::cerr << "[nigar:debug] " << msg << "\n";
}

struct Options {
    std::string input;
    std::string column = "close";
    std::string mode = "joint";
    std::string criterion = "loglik";
    double tol = 1e-5;
    std::size_t max_iter = 2000;
    std::uint64_t seed = 0;
    double rho = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double mu = 0.0;
    double delta = 0.0;
    bool has_init = false;
    bool stationary_start = false;
    std::size_t n = 1000;
    std::size_t reps = 100;
    std::size_t max_lag = 30;
    unsigned threads = 0;
    std::string output;
    std::string format = "json";
};

nigar::EmConfig make_em_config(const Options& o) {
    nigar::EmConfig cfg;
    cfg.max_iterations = o.max_iter;
    cfg.tolerance = o.tol;
    cfg.criterion = o.criterion == "params"
                        ? nigar::StopCriterion::ParamRelChange
                        : nigar::StopCriterion::LogLikRelChange;
    cfg.mode = o.mode == "two-stage" ? nigar::EmMode::TwoStage
                                     : nigar::EmMode::Joint;
    if (o.has_init)
        cfg.init = nigar::NigArModel{
            o.rho, nigar::NigParams(o.alpha, o.beta, o.mu, o.delta)};
    return cfg;
}

json config_echo(const Options& o, std::initializer_list<const char*> keys) {
    json j;
    for (const char* k : keys) {
        const std::string key(k);
        if (key == "input") j["input"] = o.input;
        if (key == "column") j["column"] = o.column;
        if (key == "mode") j["mode"] = o.mode;
        if (key == "criterion") j["criterion"] = o.criterion;
        if (key == "tol") j["tol"] = o.tol;
        if (key == "max_iter") j["max_iter"] = o.max_iter;
        if (key == "rho") j["rho"] = o.rho;
        if (key == "alpha") j["alpha"] = o.alpha;
        if (key == "beta") j["beta"] = o.beta;
        if (key == "mu") j["mu"] = o.mu;
        if (key == "delta") j["delta"] = o.delta;
        if (key == "n") j["n"] = o.n;
        if (key == "reps") j["reps"] = o.reps;
        if (key == "max_lag") j["max_lag"] = o.max_lag;
        if (key == "format") j["format"] = o.format;
        if (key == "stationary_start")
            j["stationary_start"] = o.stationary_start;
    }
    return j;
}

void write_text(const std::string& output, const std::string& text) {
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(output);
    if (!os) throw nigar::Error("cannot write " + output);
    os << text;
}

void write_json_doc(const std::string& output, const json& doc) {
    write_text(output, doc.dump(2) + "\n");
}

nigar::TimeSeries load_series(const Options& o) {
    const nigar::IngestReport rep = nigar::ingest_csv(o.input, o.column);
    log_info("ingested " + std::to_string(rep.series.size()) + " rows from " +
             o.input);
    if (rep.rows_dropped > 0)
        log_info("dropped " + std::to_string(rep.rows_dropped) +
                 " rows with missing/unparseable cells");
    if (rep.duplicate_dates > 0)
        log_info("resolved " + std::to_string(rep.duplicate_dates) +
                 " duplicate dates (last row wins)");
    if (rep.nonpositive_values > 0)
        log_info("kept " + std::to_string(rep.nonpositive_values) +
                 " non-positive values in column '" + o.column + "'");
    return rep.series;
}

json residual_diagnostics(const std::vector<double>& eps) {
    return {{"ks_normality", nigar::to_json(nigar::ks_normality(eps))},
            {"jarque_bera", nigar::to_json(nigar::jarque_bera(eps))}};
}

int cmd_fit(const Options& o) {
    const nigar::TimeSeries y = load_series(o);
    if (y.size() < 10)
        throw nigar::TooShortError("fit: need at least 10 observations, got " +
                                   std::to_string(y.size()));
    const double rho_cls = nigar::cls_rho(y);
    const nigar::FitReport fit = nigar::em_fit(y, make_em_config(o));
    const std::vector<double> eps = nigar::residuals(y, fit.params.rho);
    log_info("fit stopped after " +
             std::to_string(fit.trace.back().iteration) + " iterations (" +
             nigar::to_string(fit.stop_reason) + ")");

    json doc = {{"command", "fit"},
                {"config_echo",
                 config_echo(o, {"input", "column", "mode", "criterion",
                                 "tol", "max_iter"})},
                {"seed", nullptr},
                {"result",
                 {{"cls_rho", rho_cls},
                  {"fit", nigar::to_json(fit)},
                  {"diagnostics", residual_diagnostics(eps)}}}};
    write_json_doc(o.output, doc);
    return fit.stop_reason == nigar::StopReason::Converged ? 0 : 2;
}

int cmd_simulate(const Options& o) {
    const nigar::NigArModel model{
        o.rho, nigar::NigParams(o.alpha, o.beta, o.mu, o.delta)};
    nigar::RngStream rng(o.seed, 0);
    nigar::SimulateOptions sopts;
    sopts.stationary_start = o.stationary_start;
    const nigar::TimeSeries y = nigar::simulate_path(model, o.n, rng, sopts);

    const json meta = {{"command", "simulate"},
                       {"config_echo",
                        config_echo(o, {"rho", "alpha", "beta", "mu", "delta",
                                        "n", "format", "stationary_start"})},
                       {"seed", o.seed}};
    if (o.format == "csv") {
        std::ostringstream os;
        nigar::write_series_csv(os, y);
        write_text(o.output, os.str());
        if (!o.output.empty()) {
            std::ofstream ms(o.output + ".meta.json");
            ms << meta.dump(2) << "\n";
        }
    } else {
        json doc = meta;
        doc["result"] = {{"values", y.values}};
        write_json_doc(o.output, doc);
    }
    log_info("wrote " + std::to_string(y.size()) + " simulated values");
    return 0;
}

int cmd_diagnose(const Options& o) {
    const nigar::TimeSeries y = load_series(o);
    if (o.max_lag >= y.size())
        throw nigar::Error("diagnose: --max-lag must be below the series "
                           "length");

    const auto acf_pts = nigar::acf(y, o.max_lag);
    const auto pacf_pts = nigar::pacf(y, o.max_lag);
    const double rho_cls = nigar::cls_rho(y);
    const nigar::FitReport fit = nigar::em_fit(y, make_em_config(o));
    const std::vector<double> eps = nigar::residuals(y, fit.params.rho);

    // Residuals against a large sample from the fitted innovation law.
    nigar::RngStream rng(o.seed, 0);
    std::vector<double> fitted_sample(100000);
    for (double& v : fitted_sample)
        v = nigar::nig_sample(fit.params.innov, rng);
    const auto qq = nigar::qq_points(eps, fitted_sample);
    const nigar::TestResult ks2 = nigar::ks_2sample(eps, fitted_sample);

    json acf_json = json::array(), pacf_json = json::array();
    for (const auto& p : acf_pts) acf_json.push_back(nigar::to_json(p));
    for (const auto& p : pacf_pts) pacf_json.push_back(nigar::to_json(p));
    json qq_json = json::array();
    for (const auto& [qa, qb] : qq) qq_json.push_back({qa, qb});

    json fit_json = {{"params", nigar::to_json(fit.params)},
                     {"stop_reason", nigar::to_string(fit.stop_reason)},
                     {"iterations", fit.trace.back().iteration}};

    json doc = {
        {"command", "diagnose"},
        {"config_echo",
         config_echo(o, {"input", "column", "mode", "criterion", "tol",
                         "max_iter", "max_lag"})},
        {"seed", o.seed},
        {"result",
         {{"acf", std::move(acf_json)},
          {"pacf", std::move(pacf_json)},
          {"cls_rho", rho_cls},
          {"fit", std::move(fit_json)},
          {"residual_diagnostics", residual_diagnostics(eps)},
          {"residual_histogram",
           nigar::to_json(nigar::histogram(eps, 50))},
          {"qq_vs_fitted", std::move(qq_json)},
          {"ks_2sample_vs_fitted", nigar::to_json(ks2)}}}};
    write_json_doc(o.output, doc);
    return fit.stop_reason == nigar::StopReason::Converged ? 0 : 2;
}

int cmd_replicate(const Options& o) {
    const nigar::NigArModel truth{
        o.rho, nigar::NigParams(o.alpha, o.beta, o.mu, o.delta)};
    const nigar::ReplicationSummary summary = nigar::replication_study(
        truth, o.n, o.reps, make_em_config(o), o.seed, o.threads);
    log_info("completed " + std::to_string(summary.completed) + "/" +
             std::to_string(summary.requested) + " replicates");

    json doc = {{"command", "replicate"},
                {"config_echo",
                 config_echo(o, {"rho", "alpha", "beta", "mu", "delta", "n",
                                 "reps", "mode", "criterion", "tol",
                                 "max_iter"})},
                {"seed", o.seed},
                {"result", nigar::to_json(summary)}};
    write_json_doc(o.output, doc);

    if (!o.output.empty()) {
        // Per-replicate estimates next to the JSON summary.
        std::filesystem::path p(o.output);
        p.replace_extension();
        const std::string csv_path = p.string() + ".estimates.csv";
        std::ofstream cs(csv_path);
        cs << "replicate,alpha,beta,mu,delta,gamma,rho\n";
        const nigar::ParamDraws& e = summary.estimates;
        for (std::size_t i = 0; i < e.alpha.size(); ++i)
            cs << i << ',' << nigar::format_double(e.alpha[i]) << ','
               << nigar::format_double(e.beta[i]) << ','
               << nigar::format_double(e.mu[i]) << ','
               << nigar::format_double(e.delta[i]) << ','
               << nigar::format_double(e.gamma[i]) << ','
               << nigar::format_double(e.rho[i]) << '\n';
        log_info("wrote per-replicate estimates to " + csv_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NIG autoregressive model toolkit: simulation, EM fitting, "
                 "and diagnostics for semi-heavy-tailed AR(1) series"};
    app.require_subcommand(1);
    Options o;

    auto add_em_flags = [&](CLI::App* sub) {
        sub->add_option("--mode", o.mode, "M-step variant")
            ->check(CLI::IsMember({"joint", "two-stage"}));
        sub->add_option("--criterion", o.criterion, "Stopping rule")
            ->check(CLI::IsMember({"loglik", "params"}));
        sub->add_option("--tol", o.tol, "Stopping tolerance");
        sub->add_option("--max-iter", o.max_iter, "Iteration cap");
    };
    auto add_model_flags = [&](CLI::App* sub, bool required) {
        auto* a = sub->add_option("--alpha", o.alpha, "Tail heaviness");
        auto* d = sub->add_option("--delta", o.delta, "Scale");
        auto* r = sub->add_option("--rho", o.rho, "AR coefficient");
        sub->add_option("--beta", o.beta, "Asymmetry");
        sub->add_option("--mu", o.mu, "Location");
        if (required) {
            a->required();
            d->required();
            r->required();
        }
    };
    auto add_io_flags = [&](CLI::App* sub) {
        sub->add_option("--output", o.output, "Output path (stdout if unset)");
        sub->add_option("--format", o.format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* fit = app.add_subcommand("fit", "Fit the model to a CSV series");
    fit->add_option("--input", o.input, "Input CSV")->required();
    fit->add_option("--column", o.column, "Column to model (default close)");
    add_em_flags(fit);
    add_model_flags(fit, false);
    add_io_flags(fit);
    bool fit_init = false;
    fit->add_flag("--init-explicit", fit_init,
                  "Start EM from --rho/--alpha/--beta/--mu/--delta instead "
                  "of the moment-matched default");

    CLI::App* sim = app.add_subcommand("simulate", "Simulate a path");
    add_model_flags(sim, true);
    sim->add_option("--n", o.n, "Path length")->required();
    sim->add_option("--seed", o.seed, "RNG seed");
    sim->add_flag("--stationary-start", o.stationary_start,
                  "Warm up to stationarity instead of y0 = eps0");
    add_io_flags(sim);

    CLI::App* diag = app.add_subcommand(
        "diagnose", "ACF/PACF, fit, and residual diagnostics for a series");
    diag->add_option("--input", o.input, "Input CSV")->required();
    diag->add_option("--column", o.column, "Column to model");
    diag->add_option("--max-lag", o.max_lag, "Correlogram depth");
    diag->add_option("--seed", o.seed, "Seed for the fitted-sample draws");
    add_em_flags(diag);
    add_io_flags(diag);

    CLI::App* rep = app.add_subcommand(
        "replicate", "Simulate-then-fit replication study");
    add_model_flags(rep, true);
    rep->add_option("--n", o.n, "Series length per replicate")->required();
    rep->add_option("--reps", o.reps, "Number of replicates")->required();
    rep->add_option("--seed", o.seed, "Base seed (replicate r uses stream r)");
    rep->add_option("--threads", o.threads, "Worker threads (0 = auto)");
    add_em_flags(rep);
    add_io_flags(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (fit->parsed()) {
            o.has_init = fit_init;
            if (fit_init && !(o.alpha > 0.0 && o.delta > 0.0))
                throw nigar::Error(
                    "fit --init-explicit needs --alpha and --delta");
            return cmd_fit(o);
        }
        if (sim->parsed()) {
            if (sim->count("--format") == 0) o.format = "csv";
            return cmd_simulate(o);
        }
        if (diag->parsed()) return cmd_diagnose(o);
        if (rep->parsed()) return cmd_replicate(o);
    } catch (const nigar::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
