// Generates the bundled daily-price fixture: an NIGAR(1) path at the
// near-unit-root parameter regime of a long equity closing-price series,
// written in the Yahoo daily-export CSV layout. The committed copy under
// data/ was produced by this tool; a unit test regenerates it and compares.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "nigar/io.hpp"
#include "nigar/model.hpp"

namespace {

// Day count since 1970-01-01 to y/m/d (civil calendar).
long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

void civil_from_days(long long z, int& y, int& m, int& d) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe =
        (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long yy = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

std::string next_weekday(long long& day) {
    // Advance to the next Mon-Fri slot.
    for (;;) {
        ++day;
        const int dow = static_cast<int>(((day % 7) + 11) % 7);  // 0 = Mon
        if (dow < 5) break;
    }
    int y, m, d;
    civil_from_days(day, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: make_price_fixture <seed> <output.csv>\n";
        return 1;
    }
    const std::uint64_t seed = std::stoull(argv[1]);
    const std::string out_path = argv[2];

    const double gamma = 0.0201, beta = 0.0013;
    const nigar::NigArModel model{
        0.9941,
        nigar::NigParams(std::hypot(gamma, beta), beta, 0.226, 9.365)};
    nigar::RngStream rng(seed, 0);
    const nigar::TimeSeries y = nigar::simulate_path(model, 1594, rng);

    std::ofstream os(out_path);
    if (!os) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    os << "Date,Open,High,Low,Close,Adj Close,Volume\n";
    long long day = days_from_civil(2014, 12, 30);
    double prev = y.values.front();
    for (std::size_t t = 0; t < y.size(); ++t) {
        const std::string date = next_weekday(day);
        const double close = y.values[t];
        const double open = t == 0 ? close : prev;
        const double high = std::max(open, close);
        const double low = std::min(open, close);
        os << date << ',' << nigar::format_double(open) << ','
           << nigar::format_double(high) << ',' << nigar::format_double(low)
           << ',' << nigar::format_double(close) << ','
           << nigar::format_double(close) << ',' << 1000000 + t << '\n';
        prev = close;
    }
    std::cout << "wrote " << y.size() << " rows to " << out_path << "\n";
    return 0;
}
