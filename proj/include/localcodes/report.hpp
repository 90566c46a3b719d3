#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "localcodes/analysis.hpp"
#include "localcodes/experiment.hpp"

namespace localcodes {

/// One plotted curve: mean LC count (with standard error) per swept value.
/// Missing aggregates (no included runs) are empty optionals.
struct FigureSeries {
    std::string label;
    std::vector<std::string> x;
    std::vector<std::optional<double>> mean;
    std::vector<std::optional<double>> std_error;
    std::vector<double> reference_lines;  // vertical gridlines, e.g. n_x and 2 n_x

    /// Throws UsageError unless x, mean and std_error have equal length.
    void validate() const;

    friend bool operator==(const FigureSeries&, const FigureSeries&) = default;
};

/// Series from a sweep's aggregates. Throws UsageError on an empty result.
FigureSeries series_from_sweep(const SweepResult& result, std::string label);

/// CSV `x,mean,std_error`, one row per point, shortest round-trip numbers.
std::string render_curve(const FigureSeries& series);
/// Inverse of render_curve; label and reference lines are not stored.
FigureSeries parse_curve(std::string_view csv);

/// gnuplot script plotting `csv_name` with error bars and the reference lines.
std::string curve_gnuplot(const FigureSeries& series, const std::string& csv_name, const std::string& x_label);

/// Fixed-width text table. Cells never contain whitespace and labels never
/// contain two consecutive spaces; "-" marks a missing value.
struct TextTable {
    std::string corner;  // header text above the row labels
    std::vector<std::string> columns;
    struct Row {
        std::string label;
        std::vector<std::string> cells;
        friend bool operator==(const Row&, const Row&) = default;
    };
    std::vector<Row> rows;

    friend bool operator==(const TextTable&, const TextTable&) = default;
};

std::string render_table(const TextTable& table);
TextTable parse_table(std::string_view text);

/// Minimum / Maximum / Mean / Standard deviation rows with one column per
/// dropout rate (headed "0%", "90%", ...) under the corner "No. of LCs". Mean and standard deviation are
/// printed to two decimals, min and max as integers.
TextTable dropout_table(const std::vector<double>& rates, const std::vector<std::optional<LcStatistics>>& stats);

struct DistributionRow {
    double rate = 0.0;
    double bin_lower = 0.0;
    double pdf = 0.0;
    double cdf = 0.0;
    friend bool operator==(const DistributionRow&, const DistributionRow&) = default;
};

/// Long-format CSV `rate,bin_lower,pdf,cdf` for PDF/CDF plots per rate.
std::vector<DistributionRow> distribution_rows(const std::vector<double>& rates, const std::vector<Histogram>& histograms);
std::string render_distribution(const std::vector<DistributionRow>& rows);
std::vector<DistributionRow> parse_distribution(std::string_view csv);
std::string distribution_gnuplot(const std::vector<double>& rates, const std::string& csv_name);

struct ScatterPoint {
    double activation = 0.0;
    bool is_best_class = false;
    double y_jitter = 1.0;
    friend bool operator==(const ScatterPoint&, const ScatterPoint&) = default;
};

/// One point per dataset row for `unit`: its activation, whether the row
/// belongs to the unit's best class, and a seeded jitter in [0.9, 1.1].
/// Throws UsageError if the unit does not exist in both the record and report.
std::vector<ScatterPoint> unit_scatter(const ActivationRecord& record, const SelectivityReport& report,
                                       std::size_t unit, std::uint64_t seed);
/// CSV `activation,is_best_class,y_jitter`.
std::string render_unit_scatter(const std::vector<ScatterPoint>& points);
std::vector<ScatterPoint> parse_unit_scatter(std::string_view csv);

/// Raw sweep rows as CSV `value,repeat,seed,lc_count,accuracy_ok,wall_ms,error`.
/// lc_count is empty for failed cells. With `with_timing` false the wall_ms
/// column is left empty so reruns compare byte-for-byte.
std::string render_sweep_rows(const SweepResult& result, bool with_timing = true);
/// Rows in file order; value_index follows order of first appearance.
std::vector<SweepRow> parse_sweep_rows(std::string_view csv);

nlohmann::json aggregates_to_json(const SweepResult& result);

/// Sweep output directory: rows.csv, aggregates.json (with the resolved
/// config echoed under "config"). Without timing the wall_ms column is left
/// empty so reruns are byte-identical.
inline constexpr const char* kRowsFile = "rows.csv";
inline constexpr const char* kAggregatesFile = "aggregates.json";

std::vector<std::filesystem::path> write_sweep_results(const std::filesystem::path& dir, const SweepResult& result,
                                                       const nlohmann::json& config, bool with_timing = true);

struct LoadedSweep {
    nlohmann::json config;
    SweepResult result;
};

/// Reads rows.csv and aggregates.json, recomputes aggregates from the rows
/// and throws DataError if they differ from the stored ones.
LoadedSweep load_sweep_results(const std::filesystem::path& dir);

}  // namespace localcodes
