#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "localcodes/analysis.hpp"
#include "localcodes/codegen.hpp"
#include "localcodes/network.hpp"

namespace localcodes {

enum class SweptParameter {
    hidden_size,
    num_codewords,
    random_weight,
    perturbation_rate,
    dropout_rate,
    hidden_activation,
    output_coding,
};

std::string_view to_string(SweptParameter p);
SweptParameter parse_swept_parameter(std::string_view name);

/// Base settings plus one swept parameter. Values are kept in their textual
/// form ("200", "0.9", "relu", "one_hot") and parsed per parameter.
struct SweepConfig {
    CodeSpec code;
    OutputCoding output_coding = OutputCoding::distributed;
    NetworkConfig network;
    SweptParameter parameter = SweptParameter::hidden_size;
    std::vector<std::string> values;
    std::size_t repeats = 10;
    std::uint64_t master_seed = 0;
    /// Reuse one dataset per swept value instead of a fresh draw per repeat.
    bool fixed_dataset = false;
    double threshold = kDefaultThreshold;

    /// Throws ConfigError if repeats is 0, values is empty, or a value does
    /// not yield a valid code/network for the parameter.
    void validate() const;
};

/// Fully resolved settings for one (value, repeat) cell.
struct Cell {
    std::size_t value_index = 0;
    std::size_t repeat = 0;
    std::uint64_t seed = 0;  // child seed; dataset and init seeds derive from it
    CodeSpec code;
    OutputCoding output_coding = OutputCoding::distributed;
    NetworkConfig network;
};

/// Child seed for a cell: splitmix-style mix of the master seed with the
/// value and repeat indices.
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t value_index, std::size_t repeat);

Cell resolve_cell(const SweepConfig& config, std::size_t value_index, std::size_t repeat);

struct CellOutcome {
    std::size_t lc_count = 0;
    bool accuracy_ok = false;
    SelectivityReport report;
};

/// generate -> train -> analyze for one cell. Network input/output sizes are
/// taken from the generated dataset.
CellOutcome run_cell(const Cell& cell, double threshold);

struct SweepRow {
    std::size_t value_index = 0;
    std::string value;
    std::size_t repeat = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> lc_count;  // empty when the cell failed
    bool accuracy_ok = false;
    double wall_ms = 0.0;
    std::string error;

    bool included() const { return lc_count.has_value() && accuracy_ok; }
};

struct SweepAggregate {
    std::string value;
    std::size_t included = 0;
    std::size_t excluded = 0;
    std::optional<LcStatistics> stats;  // over included rows only
};

struct SweepResult {
    SweptParameter parameter = SweptParameter::hidden_size;
    std::vector<std::string> values;
    std::size_t repeats = 0;
    std::uint64_t master_seed = 0;
    std::vector<SweepRow> rows;  // value-major, repeat-minor
    std::vector<SweepAggregate> aggregates;

    std::size_t rows_included() const;
    std::size_t rows_excluded() const;
    /// Included LC counts for one swept value.
    std::vector<std::size_t> counts(std::size_t value_index) const;
};

/// Recomputes per-value aggregates from raw rows.
std::vector<SweepAggregate> aggregate_rows(const std::vector<std::string>& values, const std::vector<SweepRow>& rows);

using ProgressFn = std::function<void(const SweepRow&, std::size_t done, std::size_t total)>;

/// Runs every cell on a pool of `parallelism` threads. Results do not depend
/// on the degree of parallelism. Failed cells are recorded and the sweep
/// continues; throws only if every cell fails.
SweepResult run_sweep(const SweepConfig& config, std::size_t parallelism = 1, const ProgressFn& progress = {});

struct DropoutRateSummary {
    double rate = 0.0;
    std::vector<std::size_t> counts;
    std::optional<LcStatistics> stats;
    Histogram histogram;
};

struct DropoutStudy {
    SweepResult sweep;
    std::vector<DropoutRateSummary> rates;
};

/// Sweeps dropout_rate over `rates` (each in [0, 1)).
DropoutStudy dropout_study(SweepConfig config, const std::vector<double>& rates, std::size_t repeats,
                           std::size_t parallelism = 1, std::size_t bin_width = 1, const ProgressFn& progress = {});

struct PerturbationPoint {
    double rate = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

struct PerturbationStudy {
    SweepResult sweep;
    std::vector<PerturbationPoint> curve;  // rates with at least one included run
    std::optional<SqrtFit> fit;
    std::string fit_error;
};

inline constexpr double kDefaultFitCutoff = 0.4;

/// Sweeps perturbation_rate and fits mean = a + b sqrt(P) over rates <= cutoff.
/// Throws FitError before running anything if fewer than 3 distinct rates lie
/// at or below the cutoff.
PerturbationStudy perturbation_study(SweepConfig config, const std::vector<double>& rates, std::size_t repeats,
                                     std::size_t parallelism = 1, double cutoff = kDefaultFitCutoff,
                                     const ProgressFn& progress = {});

}  // namespace localcodes
