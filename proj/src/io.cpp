#include "nigar/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "nigar/errors.hpp"

namespace nigar {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

bool parse_number(const std::string& cell, double& out) {
    const std::string t = trim(cell);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(out);
}

bool looks_like_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

IngestReport ingest_csv(const std::filesystem::path& path,
                        const std::string& column) {
    std::ifstream in(path);
    if (!in)
        throw MissingFileError("ingest_csv: cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw EmptyAfterCleaningError("ingest_csv: empty file " +
                                      path.string());
    // Strip a UTF-8 BOM if present.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
        line.erase(0, 3);

    const std::vector<std::string> header = split_csv_line(line);
    const std::string want = lower(trim(column));
    std::ptrdiff_t col = -1, date_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = lower(trim(header[i]));
        if (name == want) col = static_cast<std::ptrdiff_t>(i);
        if (name == "date") date_col = static_cast<std::ptrdiff_t>(i);
    }
    if (col < 0) {
        std::string available;
        for (std::size_t i = 0; i < header.size(); ++i)
            available += (i ? ", " : "") + trim(header[i]);
        throw MissingColumnError("ingest_csv: column '" + column +
                                 "' not found; available: " + available);
    }

    IngestReport report;
    std::vector<std::pair<std::string, double>> rows;  // (date, value)
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++report.rows_read;
        const std::vector<std::string> cells = split_csv_line(line);
        double value;
        if (static_cast<std::size_t>(col) >= cells.size() ||
            !parse_number(cells[static_cast<std::size_t>(col)], value)) {
            ++report.rows_dropped;
            continue;
        }
        std::string date;
        if (date_col >= 0) {
            if (static_cast<std::size_t>(date_col) >= cells.size()) {
                ++report.rows_dropped;
                continue;
            }
            date = trim(cells[static_cast<std::size_t>(date_col)]);
            if (!looks_like_iso_date(date)) {
                ++report.rows_dropped;
                continue;
            }
        }
        if (value <= 0.0) ++report.nonpositive_values;
        rows.emplace_back(std::move(date), value);
    }
    if (rows.empty())
        throw EmptyAfterCleaningError("ingest_csv: no usable rows in " +
                                      path.string());

    if (date_col >= 0) {
        // Normalize to ascending date order; for duplicate dates the last
        // row in file order wins (vendor CSVs carry corrections).
        std::map<std::string, double> by_date;
        for (auto& [d, v] : rows) {
            if (!by_date.emplace(d, v).second) {
                by_date[d] = v;
                ++report.duplicate_dates;
            }
        }
        for (auto& [d, v] : by_date) {
            report.series.labels.push_back(d);
            report.series.values.push_back(v);
        }
    } else {
        for (auto& [d, v] : rows) report.series.values.push_back(v);
    }
    return report;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_series_csv(std::ostream& os, const TimeSeries& y) {
    os << "index,value\n";
    for (std::size_t i = 0; i < y.size(); ++i)
        os << i << ',' << format_double(y.values[i]) << '\n';
}

std::string to_string(StopCriterion c) {
    return c == StopCriterion::LogLikRelChange ? "loglik" : "params";
}

std::string to_string(EmMode m) {
    return m == EmMode::Joint ? "joint" : "two-stage";
}

std::string to_string(StopReason r) {
    return r == StopReason::Converged ? "converged" : "max_iterations";
}

nlohmann::json to_json(const NigParams& p) {
    return {{"alpha", p.alpha},
            {"beta", p.beta},
            {"mu", p.mu},
            {"delta", p.delta},
            {"gamma", p.gamma()}};
}

nlohmann::json to_json(const NigArModel& m) {
    nlohmann::json j = to_json(m.innov);
    j["rho"] = m.rho;
    return j;
}

nlohmann::json to_json(const FitReport& r) {
    nlohmann::json trace = nlohmann::json::array();
    for (const TracePoint& t : r.trace)
        trace.push_back({{"iteration", t.iteration},
                         {"params", to_json(t.params)},
                         {"log_likelihood", t.log_likelihood}});
    return {{"params", to_json(r.params)},
            {"trace", std::move(trace)},
            {"stop_reason", to_string(r.stop_reason)},
            {"criterion_used", to_string(r.criterion_used)},
            {"mode_used", to_string(r.mode_used)}};
}

nlohmann::json to_json(const TestResult& t) {
    return {{"test_name", t.test_name},
            {"statistic", t.statistic},
            {"p_value", t.p_value}};
}

nlohmann::json to_json(const CorrelogramPoint& p) {
    return {{"lag", p.lag}, {"value", p.value}, {"conf_band", p.conf_band}};
}

nlohmann::json to_json(const FiveNumber& f) {
    return {{"min", f.min},         {"q1", f.q1},
            {"median", f.median},   {"q3", f.q3},
            {"max", f.max},         {"lo_fence", f.lo_fence},
            {"hi_fence", f.hi_fence}};
}

nlohmann::json to_json(const ReplicationSummary& s) {
    return {{"requested", s.requested},
            {"completed", s.completed},
            {"failed", s.failed},
            {"estimates",
             {{"alpha", s.estimates.alpha},
              {"beta", s.estimates.beta},
              {"mu", s.estimates.mu},
              {"delta", s.estimates.delta},
              {"gamma", s.estimates.gamma},
              {"rho", s.estimates.rho}}},
            {"summary",
             {{"alpha", to_json(s.alpha)},
              {"beta", to_json(s.beta)},
              {"mu", to_json(s.mu)},
              {"delta", to_json(s.delta)},
              {"gamma", to_json(s.gamma)},
              {"rho", to_json(s.rho)}}}};
}

nlohmann::json to_json(const Histogram& h) {
    return {{"edges", h.edges}, {"counts", h.counts}};
}

}  // namespace nigar
