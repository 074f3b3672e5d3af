#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace commentrisk::stats {

/// Two-sided standard-normal quantile: z such that P(|Z| <= z) = confidence.
/// Throws InvalidParameter unless confidence lies in [0,1).
double z_two_sided(double confidence);

/// 2x2 exposure-by-event counts.
///
///                 event   no event
///   exposed         a        c
///   not exposed     b        d
struct ContingencyTable {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t c = 0;
    std::uint64_t d = 0;

    [[nodiscard]] std::uint64_t total() const noexcept { return a + b + c + d; }

    ContingencyTable& operator+=(const ContingencyTable& o) noexcept
    {
        a += o.a;
        b += o.b;
        c += o.c;
        d += o.d;
        return *this;
    }
    friend ContingencyTable operator+(ContingencyTable l, const ContingencyTable& r) noexcept { return l += r; }
    friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

/// Category buckets as seen by tabulation. Mirrors classify::RecordCategory without the dependency.
enum class Exposure { Exposed, NotExposed, Uncategorized };

struct Observation {
    Exposure exposure = Exposure::NotExposed;
    bool event = false;
};

/// Counts observations; Uncategorized ones are dropped unless `uncategorized_exposed`.
ContingencyTable tabulate(const std::vector<Observation>& observations, bool uncategorized_exposed = false);

/// (a*d)/(b*c). With `zero_correction`, 0.5 is added to every cell when any cell is zero.
/// Throws DivisionByZero when b*c = 0 and no correction applies.
double odds_ratio(const ContingencyTable& t, bool zero_correction = false);

/// Wald interval exp(ln OR -/+ z*sqrt(1/a+1/b+1/c+1/d)). Throws ZeroCell when a cell is zero and
/// `zero_correction` is off.
std::pair<double, double> confidence_interval(const ContingencyTable& t, double level, bool zero_correction = false);

/// Cellwise sum.
ContingencyTable pool(const std::vector<ContingencyTable>& tables);

/// Cellwise difference `wider - narrower`; throws InvalidParameter if any cell would go negative.
ContingencyTable subtract(const ContingencyTable& wider, const ContingencyTable& narrower);

struct WindowResult {
    std::string window;
    ContingencyTable table;
    double odds_ratio = 0.0;
};

/// One odds ratio per window, each from that window's own table, in map order.
std::vector<WindowResult> weekly_comparison(const std::map<std::string, ContingencyTable>& tables_by_window,
                                            bool zero_correction = false);

/// Same, tabulating each window's observations first.
std::vector<WindowResult> weekly_comparison(const std::map<std::string, std::vector<Observation>>& by_window,
                                            bool uncategorized_exposed = false, bool zero_correction = false);

/// Fixed nine-decimal rendering used by every report.
std::string format_ratio(double value);

}  // namespace commentrisk::stats
