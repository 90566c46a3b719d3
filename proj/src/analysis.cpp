#include "localcodes/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "localcodes/errors.hpp"

namespace localcodes {

std::string_view to_string(Polarity p) {
    switch (p) {
        case Polarity::on: return "on";
        case Polarity::off: return "off";
        default: return "none";
    }
}

double selectivity(std::span<const double> a, std::span<const double> not_a) {
    if (a.empty() || not_a.empty()) throw UsageError("selectivity: both activation lists must be non-empty");
    const auto [min_a, max_a] = std::minmax_element(a.begin(), a.end());
    const auto [min_n, max_n] = std::minmax_element(not_a.begin(), not_a.end());
    return ClassGap{*min_a - *max_n, *min_n - *max_a}.signed_gap();
}

SelectivityReport count_local_codes(const ActivationRecord& record, double threshold) {
    if (!(threshold > 0.0)) throw UsageError("count_local_codes: threshold must be positive");
    if (record.values.size() != record.rows * record.cols || record.class_ids.size() != record.rows)
        throw UsageError("count_local_codes: malformed activation record");

    const auto k = record.num_classes;
    std::vector<std::size_t> class_rows(k, 0);
    for (auto c : record.class_ids) {
        if (c >= k) throw UsageError("count_local_codes: class id out of range");
        ++class_rows[c];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (class_rows[c] == 0) throw UsageError("count_local_codes: class " + std::to_string(c) + " has no rows");
    if (k < 2) throw UsageError("count_local_codes: need at least two classes");

    SelectivityReport report;
    report.threshold = threshold;
    report.num_classes = k;
    report.units.resize(record.cols);

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> lo(k), hi(k);
    for (std::size_t u = 0; u < record.cols; ++u) {
        std::fill(lo.begin(), lo.end(), kInf);
        std::fill(hi.begin(), hi.end(), -kInf);
        for (std::size_t r = 0; r < record.rows; ++r) {
            const auto c = record.class_ids[r];
            const double v = record.at(r, u);
            lo[c] = std::min(lo[c], v);
            hi[c] = std::max(hi[c], v);
        }
        auto& unit = report.units[u];
        unit.gaps.resize(k);
        for (std::size_t c = 0; c < k; ++c) {
            double lo_rest = kInf, hi_rest = -kInf;
            for (std::size_t o = 0; o < k; ++o) {
                if (o == c) continue;
                lo_rest = std::min(lo_rest, lo[o]);
                hi_rest = std::max(hi_rest, hi[o]);
            }
            auto& gap = unit.gaps[c];
            gap = {lo[c] - hi_rest, lo_rest - hi[c]};
            if (gap.separation() > unit.gaps[unit.best_class].separation()) unit.best_class = c;
            if (gap.polarity() != Polarity::none && gap.separation() >= threshold)
                unit.qualifying.emplace_back(c, gap.polarity());
        }
        const auto& best = unit.gaps[unit.best_class];
        unit.signed_selectivity = best.signed_gap();
        if (unit.is_local_code()) {
            unit.polarity = best.polarity();
            ++report.local_code_count;
            ++(unit.polarity == Polarity::on ? report.selectively_on : report.selectively_off);
        }
    }
    return report;
}

std::string selectivity_report_json(const SelectivityReport& report) {
    nlohmann::json j;
    j["threshold"] = report.threshold;
    j["num_classes"] = report.num_classes;
    j["num_units"] = report.units.size();
    j["local_code_count"] = report.local_code_count;
    j["selectively_on"] = report.selectively_on;
    j["selectively_off"] = report.selectively_off;
    auto units = nlohmann::json::array();
    for (std::size_t u = 0; u < report.units.size(); ++u) {
        const auto& unit = report.units[u];
        nlohmann::json ju;
        ju["unit"] = u;
        ju["best_class"] = unit.best_class;
        ju["signed_selectivity"] = unit.signed_selectivity;
        ju["polarity"] = to_string(unit.polarity);
        ju["local_code"] = unit.is_local_code();
        auto q = nlohmann::json::array();
        for (const auto& [c, p] : unit.qualifying) q.push_back({{"class", c}, {"polarity", to_string(p)}});
        ju["qualifying"] = q;
        auto gaps = nlohmann::json::array();
        for (const auto& g : unit.gaps) gaps.push_back({{"on", g.on}, {"off", g.off}});
        ju["gaps"] = gaps;
        units.push_back(std::move(ju));
    }
    j["units"] = std::move(units);
    return j.dump(1);
}

double chance_disjoint_probability(std::size_t class_size, std::size_t total) {
    if (class_size == 0 || class_size > total)
        throw UsageError("chance_disjoint_probability: need 0 < class_size <= total");
    const auto n = static_cast<double>(total);
    const auto k = static_cast<double>(class_size);
    const double ln_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return -ln_choose / std::log(10.0);
}

SqrtFit sqrt_fit(std::span<const std::pair<double, double>> points, double cutoff) {
    std::vector<std::pair<double, double>> used;  // (sqrt(P), count)
    for (const auto& [p, y] : points) {
        if (!(p >= 0.0 && p <= 1.0)) throw FitError("sqrt_fit: P values must lie in [0, 1]");
        if (p <= cutoff) used.emplace_back(std::sqrt(p), y);
    }
    if (used.size() < 3) throw FitError("sqrt_fit: need at least 3 points at or below the cutoff");

    const auto n = static_cast<double>(used.size());
    double mean_u = 0.0, mean_y = 0.0;
    for (const auto& [u, y] : used) {
        mean_u += u;
        mean_y += y;
    }
    mean_u /= n;
    mean_y /= n;
    double suu = 0.0, suy = 0.0, syy = 0.0;
    for (const auto& [u, y] : used) {
        suu += (u - mean_u) * (u - mean_u);
        suy += (u - mean_u) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if (suu <= 1e-12 * n) throw FitError("sqrt_fit: degenerate design (P values coincide)");

    SqrtFit fit;
    fit.slope = suy / suu;
    fit.intercept = mean_y - fit.slope * mean_u;
    fit.points_used = used.size();
    double ss_res = 0.0;
    for (const auto& [u, y] : used) {
        const double r = y - (fit.intercept + fit.slope * u);
        ss_res += r * r;
    }
    // A constant response is fit exactly by a flat line.
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

LcStatistics lc_statistics(std::span<const double> counts) {
    if (counts.empty()) throw UsageError("lc_statistics: empty count list");
    LcStatistics s;
    s.n = counts.size();
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    s.min = *lo;
    s.max = *hi;
    s.mean = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double c : counts) ss += (c - s.mean) * (c - s.mean);
        s.std_dev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    s.std_error = s.std_dev / std::sqrt(static_cast<double>(s.n));
    return s;
}

LcStatistics lc_statistics(std::span<const std::size_t> counts) {
    std::vector<double> d(counts.begin(), counts.end());
    return lc_statistics(std::span<const double>(d));
}

Histogram histogram(std::span<const std::size_t> counts, std::size_t bin_width) {
    if (bin_width == 0) throw UsageError("histogram: bin_width must be at least 1");
    Histogram h;
    h.bin_width = static_cast<double>(bin_width);
    if (counts.empty()) return h;
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    const auto first = *lo / bin_width;
    const auto bins = *hi / bin_width - first + 1;
    std::vector<std::size_t> tally(bins, 0);
    for (auto c : counts) ++tally[c / bin_width - first];
    const auto total = static_cast<double>(counts.size());
    std::size_t running = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        running += tally[b];
        h.bin_lower.push_back(static_cast<double>((first + b) * bin_width));
        h.pdf.push_back(static_cast<double>(tally[b]) / total);
        h.cdf.push_back(static_cast<double>(running) / total);
    }
    return h;
}

}  // namespace localcodes
