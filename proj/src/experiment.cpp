#include "localcodes/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <set>
#include <thread>

#include "localcodes/errors.hpp"
#include "localcodes/text.hpp"

namespace localcodes {

namespace {

constexpr std::pair<SweptParameter, std::string_view> kParameterNames[] = {
    {SweptParameter::hidden_size, "hidden_size"},
    {SweptParameter::num_codewords, "num_codewords"},
    {SweptParameter::random_weight, "random_weight"},
    {SweptParameter::perturbation_rate, "perturbation_rate"},
    {SweptParameter::dropout_rate, "dropout_rate"},
    {SweptParameter::hidden_activation, "hidden_activation"},
    {SweptParameter::output_coding, "output_coding"},
};

// Domain-separation tags for seeds derived from a cell seed.
constexpr std::uint64_t kDatasetStream = 0x64617461;
constexpr std::uint64_t kInitStream = 0x696e6974;
constexpr std::uint64_t kFixedDatasetRepeat = ~std::uint64_t{0};

void apply_value(SweptParameter p, const std::string& value, CodeSpec& code, OutputCoding& coding, NetworkConfig& net) {
    const auto what = to_string(p);
    switch (p) {
        case SweptParameter::hidden_size: net.hidden_size = text::parse_u64(value, what); break;
        case SweptParameter::num_codewords: code.num_codewords = text::parse_u64(value, what); break;
        case SweptParameter::random_weight: code.random_weight = text::parse_u64(value, what); break;
        case SweptParameter::perturbation_rate: code.perturbation_rate = text::parse_double(value, what); break;
        case SweptParameter::dropout_rate: net.dropout_rate = text::parse_double(value, what); break;
        case SweptParameter::hidden_activation: net.hidden_activation = parse_activation(value); break;
        case SweptParameter::output_coding: coding = parse_output_coding(value); break;
    }
}

std::size_t output_length(OutputCoding coding, const CodeSpec& code) {
    return coding == OutputCoding::distributed ? kDistributedOutputLength : code.num_classes;
}

}  // namespace

std::string_view to_string(SweptParameter p) {
    for (const auto& [param, name] : kParameterNames)
        if (param == p) return name;
    return "unknown";
}

SweptParameter parse_swept_parameter(std::string_view name) {
    for (const auto& [param, n] : kParameterNames)
        if (n == name) return param;
    throw ConfigError("unknown swept parameter '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
    if (repeats == 0) throw ConfigError("sweep repeats must be at least 1");
    if (values.empty()) throw ConfigError("sweep values must not be empty");
    if (!(threshold > 0.0)) throw ConfigError("selectivity threshold must be positive");
    std::set<std::string> seen;
    for (const auto& v : values) {
        if (!seen.insert(v).second) throw ConfigError("duplicate sweep value '" + v + "'");
        auto c = code;
        auto oc = output_coding;
        auto n = network;
        apply_value(parameter, v, c, oc, n);
        c.validate();
        n.input_size = c.codeword_length;
        n.output_size = output_length(oc, c);
        n.validate();
    }
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t value_index, std::size_t repeat) {
    return mix_seed(master_seed, value_index, repeat);
}

Cell resolve_cell(const SweepConfig& config, std::size_t value_index, std::size_t repeat) {
    Cell cell;
    cell.value_index = value_index;
    cell.repeat = repeat;
    cell.seed = cell_seed(config.master_seed, value_index, repeat);
    cell.code = config.code;
    cell.output_coding = config.output_coding;
    cell.network = config.network;
    apply_value(config.parameter, config.values.at(value_index), cell.code, cell.output_coding, cell.network);
    cell.code.seed = config.fixed_dataset
                         ? mix_seed(cell_seed(config.master_seed, value_index, kFixedDatasetRepeat), kDatasetStream)
                         : mix_seed(cell.seed, kDatasetStream);
    cell.network.init_seed = mix_seed(cell.seed, kInitStream);
    cell.network.input_size = cell.code.codeword_length;
    cell.network.output_size = output_length(cell.output_coding, cell.code);
    return cell;
}

CellOutcome run_cell(const Cell& cell, double threshold) {
    const auto dataset = generate_dataset(cell.code, cell.output_coding);
    auto network = cell.network;
    network.input_size = dataset.input_size();
    network.output_size = dataset.output_size();
    const auto trained = train(dataset, network);
    CellOutcome out;
    out.report = count_local_codes(trained.activations, threshold);
    out.lc_count = out.report.local_code_count;
    out.accuracy_ok = trained.network.reached_full_accuracy;
    return out;
}

std::size_t SweepResult::rows_included() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.included(); }));
}

std::size_t SweepResult::rows_excluded() const { return rows.size() - rows_included(); }

std::vector<std::size_t> SweepResult::counts(std::size_t value_index) const {
    std::vector<std::size_t> out;
    for (const auto& r : rows)
        if (r.value_index == value_index && r.included()) out.push_back(*r.lc_count);
    return out;
}

std::vector<SweepAggregate> aggregate_rows(const std::vector<std::string>& values, const std::vector<SweepRow>& rows) {
    std::vector<SweepAggregate> aggs(values.size());
    std::vector<std::vector<double>> counts(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) aggs[i].value = values[i];
    for (const auto& r : rows) {
        if (r.value_index >= values.size()) throw DataError("sweep row refers to unknown value index");
        if (r.included()) {
            ++aggs[r.value_index].included;
            counts[r.value_index].push_back(static_cast<double>(*r.lc_count));
        } else {
            ++aggs[r.value_index].excluded;
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!counts[i].empty()) aggs[i].stats = lc_statistics(std::span<const double>(counts[i]));
    return aggs;
}

SweepResult run_sweep(const SweepConfig& config, std::size_t parallelism, const ProgressFn& progress) {
    config.validate();
    const auto total = config.values.size() * config.repeats;

    std::vector<Cell> cells;
    cells.reserve(total);
    std::set<std::uint64_t> seeds;
    for (std::size_t v = 0; v < config.values.size(); ++v)
        for (std::size_t r = 0; r < config.repeats; ++r) {
            cells.push_back(resolve_cell(config, v, r));
            if (!seeds.insert(cells.back().seed).second) throw ConfigError("child seed collision in sweep");
        }

    SweepResult result;
    result.parameter = config.parameter;
    result.values = config.values;
    result.repeats = config.repeats;
    result.master_seed = config.master_seed;
    result.rows.resize(total);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (auto i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
            const auto& cell = cells[i];
            SweepRow row;
            row.value_index = cell.value_index;
            row.value = config.values[cell.value_index];
            row.repeat = cell.repeat;
            row.seed = cell.seed;
            const auto start = std::chrono::steady_clock::now();
            try {
                const auto outcome = run_cell(cell, config.threshold);
                row.lc_count = outcome.lc_count;
                row.accuracy_ok = outcome.accuracy_ok;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            result.rows[i] = row;
            const auto finished = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(row, finished, total);
            }
        }
    };

    const auto threads = std::clamp<std::size_t>(parallelism, 1, total);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    if (std::all_of(result.rows.begin(), result.rows.end(), [](const SweepRow& r) { return !r.error.empty(); }))
        throw TrainingError("every sweep cell failed; first error: " + result.rows.front().error, 0);
    result.aggregates = aggregate_rows(result.values, result.rows);
    return result;
}

DropoutStudy dropout_study(SweepConfig config, const std::vector<double>& rates, std::size_t repeats,
                           std::size_t parallelism, std::size_t bin_width, const ProgressFn& progress) {
    for (double r : rates)
        if (!(r >= 0.0 && r < 1.0)) throw ConfigError("dropout rates must lie in [0, 1)");
    config.parameter = SweptParameter::dropout_rate;
    config.repeats = repeats;
    config.values.clear();
    for (double r : rates) config.values.push_back(text::format_double(r));

    DropoutStudy study;
    study.sweep = run_sweep(config, parallelism, progress);
    for (std::size_t i = 0; i < rates.size(); ++i) {
        DropoutRateSummary s;
        s.rate = rates[i];
        s.counts = study.sweep.counts(i);
        s.stats = study.sweep.aggregates[i].stats;
        s.histogram = histogram(s.counts, bin_width);
        study.rates.push_back(std::move(s));
    }
    return study;
}

PerturbationStudy perturbation_study(SweepConfig config, const std::vector<double>& rates, std::size_t repeats,
                                     std::size_t parallelism, double cutoff, const ProgressFn& progress) {
    std::set<double> usable;
    for (double r : rates) {
        if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("perturbation rates must lie in [0, 1]");
        if (r <= cutoff) usable.insert(r);
    }
    if (usable.size() < 3)
        throw FitError("perturbation study needs at least 3 distinct rates at or below the fit cutoff " +
                       text::format_double(cutoff));

    config.parameter = SweptParameter::perturbation_rate;
    config.repeats = repeats;
    config.values.clear();
    for (double r : rates) config.values.push_back(text::format_double(r));

    PerturbationStudy study;
    study.sweep = run_sweep(config, parallelism, progress);
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const auto& agg = study.sweep.aggregates[i];
        if (!agg.stats) continue;
        study.curve.push_back({rates[i], agg.stats->mean, agg.stats->std_error, agg.stats->n});
        points.emplace_back(rates[i], agg.stats->mean);
    }
    try {
        study.fit = sqrt_fit(points, cutoff);
    } catch (const FitError& e) {
        study.fit_error = e.what();
    }
    return study;
}

}  // namespace localcodes
