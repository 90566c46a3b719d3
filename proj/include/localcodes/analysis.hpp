#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "localcodes/network.hpp"

namespace localcodes {

enum class Polarity { none, on, off };
std::string_view to_string(Polarity p);

/// Signed separation gap between the activations of class A and of all
/// other classes (not-A).
///
/// With on = min(A) - max(not-A) and off = min(not-A) - max(A):
/// returns +on if on > 0 (selectively on), -off if off > 0 (selectively off),
/// otherwise max(on, off), which is <= 0 and means no separation. A tie
/// (gap exactly 0) is not separated. Throws UsageError if either list is
/// empty.
double selectivity(std::span<const double> acts_a, std::span<const double> acts_not_a);

/// Both raw gaps for one (unit, class) pair.
struct ClassGap {
    double on = 0.0;   // min(A) - max(not-A)
    double off = 0.0;  // min(not-A) - max(A)

    Polarity polarity() const { return on > 0.0 ? Polarity::on : off > 0.0 ? Polarity::off : Polarity::none; }
    double separation() const { return std::max(on, off); }
    /// Same value `selectivity` returns for this pair.
    double signed_gap() const { return on > 0.0 ? on : off > 0.0 ? -off : std::max(on, off); }
};

struct UnitSelectivity {
    std::vector<ClassGap> gaps;  // one per class
    std::size_t best_class = 0;  // largest separation, lowest index on ties
    double signed_selectivity = 0.0;
    Polarity polarity = Polarity::none;  // of best_class, none unless a local code
    /// (class, polarity) pairs whose separation reaches the threshold.
    std::vector<std::pair<std::size_t, Polarity>> qualifying;

    bool is_local_code() const { return !qualifying.empty(); }
};

struct SelectivityReport {
    double threshold = 0.05;
    std::size_t num_classes = 0;
    std::vector<UnitSelectivity> units;
    std::size_t local_code_count = 0;
    std::size_t selectively_on = 0;   // local codes whose best class is on
    std::size_t selectively_off = 0;
};

inline constexpr double kDefaultThreshold = 0.05;

/// A unit is a local code iff for some class the A and not-A activation
/// ranges are separated by at least `threshold`. Multi-class units count once.
/// Throws UsageError for threshold <= 0 or a class without rows.
SelectivityReport count_local_codes(const ActivationRecord& record, double threshold = kDefaultThreshold);

std::string selectivity_report_json(const SelectivityReport& report);

/// log10 of C(k, k) / C(n, k): the chance that a fixed set of k items out of
/// n is exactly the top k. Computed with lgamma. Throws UsageError unless
/// 0 < class_size <= total.
double chance_disjoint_probability(std::size_t class_size, std::size_t total);

struct SqrtFit {
    double intercept = 0.0;  // a
    double slope = 0.0;      // b, coefficient of sqrt(P)
    double r_squared = 0.0;
    std::size_t points_used = 0;
};

/// Least-squares fit of count = a + b * sqrt(P) over the points with
/// P <= cutoff. Throws FitError with fewer than 3 usable points or when all
/// usable P coincide.
SqrtFit sqrt_fit(std::span<const std::pair<double, double>> points, double cutoff = 1.0);

struct LcStatistics {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;  // sample (n - 1) standard deviation; 0 for n = 1
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Throws UsageError on an empty list.
LcStatistics lc_statistics(std::span<const double> counts);
LcStatistics lc_statistics(std::span<const std::size_t> counts);

struct Histogram {
    double bin_width = 1.0;
    std::vector<double> bin_lower;  // inclusive lower edge of each bin
    std::vector<double> pdf;        // sums to 1
    std::vector<double> cdf;        // monotone, ends at 1
};

/// Bins are aligned to multiples of bin_width and span min..max of counts.
Histogram histogram(std::span<const std::size_t> counts, std::size_t bin_width = 1);

}  // namespace localcodes
