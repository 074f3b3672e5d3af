#include "commentrisk/stats.hpp"

#include "commentrisk/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <cstdio>

namespace commentrisk::stats {

double z_two_sided(double confidence)
{
    if (!(confidence >= 0.0 && confidence < 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "confidence must lie in [0,1)");
    }
    if (confidence == 0.0) return 0.0;
    const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, 0.5 + confidence / 2.0);
}

ContingencyTable tabulate(const std::vector<Observation>& observations, bool uncategorized_exposed)
{
    ContingencyTable t;
    for (const auto& o : observations) {
        auto exposure = o.exposure;
        if (exposure == Exposure::Uncategorized) {
            if (!uncategorized_exposed) continue;
            exposure = Exposure::Exposed;
        }
        const bool exposed = exposure == Exposure::Exposed;
        if (exposed && o.event) ++t.a;
        else if (!exposed && o.event) ++t.b;
        else if (exposed) ++t.c;
        else ++t.d;
    }
    return t;
}

namespace {

struct Cells {
    double a, b, c, d;
};

Cells cells(const ContingencyTable& t, bool zero_correction)
{
    Cells x{static_cast<double>(t.a), static_cast<double>(t.b), static_cast<double>(t.c), static_cast<double>(t.d)};
    if (zero_correction && (t.a == 0 || t.b == 0 || t.c == 0 || t.d == 0)) {
        x.a += 0.5;
        x.b += 0.5;
        x.c += 0.5;
        x.d += 0.5;
    }
    return x;
}

}  // namespace

double odds_ratio(const ContingencyTable& t, bool zero_correction)
{
    const auto x = cells(t, zero_correction);
    if (x.b * x.c == 0.0) {
        throw Error(ErrorKind::DivisionByZero, "odds ratio undefined: b*c = 0");
    }
    return (x.a * x.d) / (x.b * x.c);
}

std::pair<double, double> confidence_interval(const ContingencyTable& t, double level, bool zero_correction)
{
    const auto x = cells(t, zero_correction);
    if (x.a == 0.0 || x.b == 0.0 || x.c == 0.0 || x.d == 0.0) {
        throw Error(ErrorKind::ZeroCell, "confidence interval needs all cells > 0");
    }
    const double log_or = std::log((x.a * x.d) / (x.b * x.c));
    const double se = std::sqrt(1.0 / x.a + 1.0 / x.b + 1.0 / x.c + 1.0 / x.d);
    const double z = z_two_sided(level);
    return {std::exp(log_or - z * se), std::exp(log_or + z * se)};
}

ContingencyTable pool(const std::vector<ContingencyTable>& tables)
{
    ContingencyTable sum;
    for (const auto& t : tables) sum += t;
    return sum;
}

ContingencyTable subtract(const ContingencyTable& wider, const ContingencyTable& narrower)
{
    if (narrower.a > wider.a || narrower.b > wider.b || narrower.c > wider.c || narrower.d > wider.d) {
        throw Error(ErrorKind::InvalidParameter, "subtraction would produce a negative cell");
    }
    return {wider.a - narrower.a, wider.b - narrower.b, wider.c - narrower.c, wider.d - narrower.d};
}

std::vector<WindowResult> weekly_comparison(const std::map<std::string, ContingencyTable>& tables_by_window,
                                            bool zero_correction)
{
    std::vector<WindowResult> out;
    out.reserve(tables_by_window.size());
    for (const auto& [window, table] : tables_by_window) {
        out.push_back({window, table, odds_ratio(table, zero_correction)});
    }
    return out;
}

std::vector<WindowResult> weekly_comparison(const std::map<std::string, std::vector<Observation>>& by_window,
                                            bool uncategorized_exposed, bool zero_correction)
{
    std::map<std::string, ContingencyTable> tables;
    for (const auto& [window, obs] : by_window) tables[window] = tabulate(obs, uncategorized_exposed);
    return weekly_comparison(tables, zero_correction);
}

std::string format_ratio(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", value);
    return buf;
}

}  // namespace commentrisk::stats
