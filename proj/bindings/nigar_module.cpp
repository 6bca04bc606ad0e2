#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "nigar/bessel.hpp"
#include "nigar/diagnostics.hpp"
#include "nigar/errors.hpp"
#include "nigar/estimation.hpp"
#include "nigar/io.hpp"
#include "nigar/model.hpp"

namespace py = pybind11;
using namespace nigar;

PYBIND11_MODULE(_nigar, m) {
    m.doc() = "NIG autoregressive model toolkit: simulation, EM estimation, "
              "and diagnostics";

    py::register_exception<Error>(m, "NigarError", PyExc_RuntimeError);

    // Special functions.
    m.def("bessel_k", &bessel_k, py::arg("nu"), py::arg("x"),
          "Modified Bessel function of the third kind, integer order");
    m.def("log_bessel_k", &log_bessel_k, py::arg("nu"), py::arg("x"));
    m.def("bessel_k_scaled", &bessel_k_scaled, py::arg("nu"), py::arg("x"),
          "exp(x) * K_nu(x)");

    py::class_<RngStream>(m, "RngStream",
                          "Deterministic (seed, stream_id) random stream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
             py::arg("stream_id") = 0)
        .def("uniform", &RngStream::uniform)
        .def("normal", &RngStream::normal)
        .def_property_readonly("seed", &RngStream::seed)
        .def_property_readonly("stream_id", &RngStream::stream_id);

    py::class_<NigParams>(m, "NigParams")
        .def(py::init<double, double, double, double>(), py::arg("alpha"),
             py::arg("beta"), py::arg("mu"), py::arg("delta"))
        .def_readonly("alpha", &NigParams::alpha)
        .def_readonly("beta", &NigParams::beta)
        .def_readonly("mu", &NigParams::mu)
        .def_readonly("delta", &NigParams::delta)
        .def_property_readonly("gamma", &NigParams::gamma)
        .def("__repr__", [](const NigParams& p) {
            return "NigParams(alpha=" + std::to_string(p.alpha) +
                   ", beta=" + std::to_string(p.beta) +
                   ", mu=" + std::to_string(p.mu) +
                   ", delta=" + std::to_string(p.delta) + ")";
        });

    py::class_<IgParams>(m, "IgParams")
        .def(py::init<double, double>(), py::arg("gamma"), py::arg("delta"))
        .def_readonly("gamma", &IgParams::gamma)
        .def_readonly("delta", &IgParams::delta);

    py::class_<CondMoments>(m, "CondMoments")
        .def_readonly("s", &CondMoments::s)
        .def_readonly("w", &CondMoments::w);

    py::class_<Moments>(m, "Moments")
        .def_readonly("mean", &Moments::mean)
        .def_readonly("variance", &Moments::variance);

    m.def("ig_pdf", &ig_pdf, py::arg("x"), py::arg("params"));
    m.def("ig_sample", &ig_sample, py::arg("params"), py::arg("rng"));
    m.def("nig_phi", &nig_phi, py::arg("x"), py::arg("params"));
    m.def("nig_logpdf", &nig_logpdf, py::arg("x"), py::arg("params"));
    m.def("nig_pdf", &nig_pdf, py::arg("x"), py::arg("params"));
    m.def("nig_sample", &nig_sample, py::arg("params"), py::arg("rng"));
    m.def("gig_cond_moments", &gig_cond_moments, py::arg("eps"),
          py::arg("params"));
    m.def("nig_moments", &nig_moments, py::arg("params"));

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init([](std::vector<double> values,
                         std::vector<std::string> labels) {
                 TimeSeries y;
                 y.values = std::move(values);
                 y.labels = std::move(labels);
                 return y;
             }),
             py::arg("values"),
             py::arg("labels") = std::vector<std::string>{})
        .def_readwrite("values", &TimeSeries::values)
        .def_readwrite("labels", &TimeSeries::labels)
        .def("__len__", &TimeSeries::size);

    py::class_<NigArModel>(m, "NigArModel")
        .def(py::init<double, NigParams>(), py::arg("rho"), py::arg("innov"))
        .def_readwrite("rho", &NigArModel::rho)
        .def_readwrite("innov", &NigArModel::innov);

    m.def(
        "simulate_path",
        [](const NigArModel& model, std::size_t n, RngStream& rng,
           bool stationary_start) {
            SimulateOptions opts;
            opts.stationary_start = stationary_start;
            return simulate_path(model, n, rng, opts);
        },
        py::arg("model"), py::arg("n"), py::arg("rng"),
        py::arg("stationary_start") = false);
    m.def("residuals", &residuals, py::arg("series"), py::arg("rho"));
    m.def("theoretical_moments", &theoretical_moments, py::arg("model"),
          py::arg("t"));

    // Estimation.
    py::enum_<StopCriterion>(m, "StopCriterion")
        .value("LOGLIK_REL_CHANGE", StopCriterion::LogLikRelChange)
        .value("PARAM_REL_CHANGE", StopCriterion::ParamRelChange);
    py::enum_<EmMode>(m, "EmMode")
        .value("JOINT", EmMode::Joint)
        .value("TWO_STAGE", EmMode::TwoStage);
    py::enum_<StopReason>(m, "StopReason")
        .value("CONVERGED", StopReason::Converged)
        .value("MAX_ITERATIONS", StopReason::MaxIterations);

    py::class_<EmConfig>(m, "EmConfig")
        .def(py::init([](std::size_t max_iterations, double tolerance,
                         StopCriterion criterion, EmMode mode,
                         std::optional<NigArModel> init) {
                 EmConfig cfg;
                 cfg.max_iterations = max_iterations;
                 cfg.tolerance = tolerance;
                 cfg.criterion = criterion;
                 cfg.mode = mode;
                 cfg.init = std::move(init);
                 return cfg;
             }),
             py::arg("max_iterations") = 2000, py::arg("tolerance") = 1e-5,
             py::arg("criterion") = StopCriterion::LogLikRelChange,
             py::arg("mode") = EmMode::Joint,
             py::arg("init") = std::nullopt)
        .def_readwrite("max_iterations", &EmConfig::max_iterations)
        .def_readwrite("tolerance", &EmConfig::tolerance)
        .def_readwrite("criterion", &EmConfig::criterion)
        .def_readwrite("mode", &EmConfig::mode)
        .def_readwrite("init", &EmConfig::init);

    py::class_<TracePoint>(m, "TracePoint")
        .def_readonly("iteration", &TracePoint::iteration)
        .def_readonly("params", &TracePoint::params)
        .def_readonly("log_likelihood", &TracePoint::log_likelihood);

    py::class_<FitReport>(m, "FitReport")
        .def_readonly("params", &FitReport::params)
        .def_readonly("trace", &FitReport::trace)
        .def_readonly("stop_reason", &FitReport::stop_reason)
        .def_readonly("criterion_used", &FitReport::criterion_used)
        .def_readonly("mode_used", &FitReport::mode_used)
        .def("to_json", [](const FitReport& r) { return to_json(r).dump(); });

    m.def("cls_rho", &cls_rho, py::arg("series"));
    m.def(
        "e_step",
        [](const std::vector<double>& eps, const NigParams& p) {
            std::vector<double> s, w;
            e_step(eps, p, s, w);
            return py::make_tuple(std::move(s), std::move(w));
        },
        py::arg("eps"), py::arg("params"));
    m.def(
        "m_step_joint",
        [](const TimeSeries& y, const std::vector<double>& s,
           const std::vector<double>& w) { return m_step_joint(y, s, w); },
        py::arg("series"), py::arg("s"), py::arg("w"));
    m.def(
        "m_step_two_stage",
        [](const TimeSeries& y, double rho, const std::vector<double>& s,
           const std::vector<double>& w) {
            return m_step_two_stage(y, rho, s, w);
        },
        py::arg("series"), py::arg("rho_hat"), py::arg("s"), py::arg("w"));
    m.def(
        "log_likelihood",
        [](const std::vector<double>& eps, const NigParams& p) {
            return log_likelihood(eps, p);
        },
        py::arg("eps"), py::arg("params"));
    m.def(
        "init_method_of_moments",
        [](const std::vector<double>& eps) {
            return init_method_of_moments(eps);
        },
        py::arg("eps"));
    m.def("em_fit", &em_fit, py::arg("series"), py::arg("config") = EmConfig{});

    // Diagnostics.
    py::class_<CorrelogramPoint>(m, "CorrelogramPoint")
        .def_readonly("lag", &CorrelogramPoint::lag)
        .def_readonly("value", &CorrelogramPoint::value)
        .def_readonly("conf_band", &CorrelogramPoint::conf_band);

    py::class_<TestResult>(m, "TestResult")
        .def_readonly("statistic", &TestResult::statistic)
        .def_readonly("p_value", &TestResult::p_value)
        .def_readonly("test_name", &TestResult::test_name);

    py::class_<FiveNumber>(m, "FiveNumber")
        .def_readonly("min", &FiveNumber::min)
        .def_readonly("q1", &FiveNumber::q1)
        .def_readonly("median", &FiveNumber::median)
        .def_readonly("q3", &FiveNumber::q3)
        .def_readonly("max", &FiveNumber::max)
        .def_readonly("lo_fence", &FiveNumber::lo_fence)
        .def_readonly("hi_fence", &FiveNumber::hi_fence);

    py::class_<ParamDraws>(m, "ParamDraws")
        .def_readonly("alpha", &ParamDraws::alpha)
        .def_readonly("beta", &ParamDraws::beta)
        .def_readonly("mu", &ParamDraws::mu)
        .def_readonly("delta", &ParamDraws::delta)
        .def_readonly("gamma", &ParamDraws::gamma)
        .def_readonly("rho", &ParamDraws::rho);

    py::class_<ReplicationSummary>(m, "ReplicationSummary")
        .def_readonly("requested", &ReplicationSummary::requested)
        .def_readonly("completed", &ReplicationSummary::completed)
        .def_readonly("failed", &ReplicationSummary::failed)
        .def_readonly("estimates", &ReplicationSummary::estimates)
        .def_readonly("alpha", &ReplicationSummary::alpha)
        .def_readonly("beta", &ReplicationSummary::beta)
        .def_readonly("mu", &ReplicationSummary::mu)
        .def_readonly("delta", &ReplicationSummary::delta)
        .def_readonly("gamma", &ReplicationSummary::gamma)
        .def_readonly("rho", &ReplicationSummary::rho)
        .def("to_json",
             [](const ReplicationSummary& s) { return to_json(s).dump(); });

    m.def("acf", &acf, py::arg("series"), py::arg("max_lag"));
    m.def("pacf", &pacf, py::arg("series"), py::arg("max_lag"));
    m.def(
        "ks_2sample",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return ks_2sample(a, b);
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "ks_normality",
        [](const std::vector<double>& a) { return ks_normality(a); },
        py::arg("a"));
    m.def(
        "ks_gof_normal",
        [](const std::vector<double>& a, double mean, double sd) {
            return ks_gof_normal(a, mean, sd);
        },
        py::arg("a"), py::arg("mean"), py::arg("sd"));
    m.def(
        "jarque_bera",
        [](const std::vector<double>& a) { return jarque_bera(a); },
        py::arg("a"));
    m.def(
        "qq_points",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return qq_points(a, b);
        },
        py::arg("a"), py::arg("b"));
    m.def("replication_study", &replication_study, py::arg("truth"),
          py::arg("n"), py::arg("reps"), py::arg("config"), py::arg("seed"),
          py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());

    // CSV ingestion.
    py::class_<IngestReport>(m, "IngestReport")
        .def_readonly("series", &IngestReport::series)
        .def_readonly("rows_read", &IngestReport::rows_read)
        .def_readonly("rows_dropped", &IngestReport::rows_dropped)
        .def_readonly("duplicate_dates", &IngestReport::duplicate_dates)
        .def_readonly("nonpositive_values", &IngestReport::nonpositive_values);
    m.def(
        "ingest_csv",
        [](const std::string& path, const std::string& column) {
            return ingest_csv(path, column);
        },
        py::arg("path"), py::arg("column") = "close");
}
