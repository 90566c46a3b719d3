#include "localcodes/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "localcodes/binary_io.hpp"
#include "localcodes/errors.hpp"
#include "localcodes/rng.hpp"
#include "localcodes/text.hpp"

namespace localcodes {

namespace {

std::string optional_field(const std::optional<double>& v) { return v ? text::format_double(*v) : std::string(); }

std::optional<double> parse_optional(const std::string& s, std::string_view what) {
    if (s.empty()) return std::nullopt;
    try {
        return text::parse_double(s, what);
    } catch (const ConfigError& e) {
        throw DataError(e.what());
    }
}

double parse_required(const std::string& s, std::string_view what) {
    auto v = parse_optional(s, what);
    if (!v) throw DataError(std::string(what) + ": missing value");
    return *v;
}

std::uint64_t parse_count(const std::string& s, std::string_view what) {
    try {
        return text::parse_u64(s, what);
    } catch (const ConfigError& e) {
        throw DataError(e.what());
    }
}

// Parses a CSV document and checks its header; returns the data records.
std::vector<std::vector<std::string>> csv_body(std::string_view csv, const std::vector<std::string>& header) {
    auto records = text::parse_csv(csv);
    if (records.empty() || records.front() != header)
        throw DataError("csv: expected header '" + text::csv_line(header).substr(0, text::csv_line(header).size() - 1) +
                        "'");
    records.erase(records.begin());
    for (const auto& r : records)
        if (r.size() != header.size()) throw DataError("csv: row has " + std::to_string(r.size()) + " fields");
    return records;
}

std::string percent_label(double rate) {
    const double pct = rate * 100.0;
    const double rounded = std::round(pct);
    return (std::abs(pct - rounded) < 1e-9 ? text::format_double(rounded) : text::format_double(pct)) + "%";
}

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

bool numeric(const std::vector<std::string>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](const std::string& s) {
        try {
            text::parse_double(s, "x");
            return true;
        } catch (const ConfigError&) {
            return false;
        }
    });
}

nlohmann::json stats_json(const std::optional<LcStatistics>& s) {
    if (!s) return nullptr;
    return {{"n", s->n},       {"min", s->min},           {"max", s->max},
            {"mean", s->mean}, {"std_dev", s->std_dev}, {"std_error", s->std_error}};
}

}  // namespace

void FigureSeries::validate() const {
    if (mean.size() != x.size() || std_error.size() != x.size())
        throw UsageError("figure series: x, mean and std_error lengths differ");
}

FigureSeries series_from_sweep(const SweepResult& result, std::string label) {
    if (result.rows.empty() || result.aggregates.empty()) throw UsageError("render_curve: empty sweep result");
    FigureSeries s;
    s.label = std::move(label);
    for (const auto& agg : result.aggregates) {
        s.x.push_back(agg.value);
        s.mean.push_back(agg.stats ? std::optional(agg.stats->mean) : std::nullopt);
        s.std_error.push_back(agg.stats ? std::optional(agg.stats->std_error) : std::nullopt);
    }
    return s;
}

std::string render_curve(const FigureSeries& series) {
    series.validate();
    if (series.x.empty()) throw UsageError("render_curve: empty series");
    std::string out = text::csv_line({"x", "mean", "std_error"});
    for (std::size_t i = 0; i < series.x.size(); ++i)
        out += text::csv_line({series.x[i], optional_field(series.mean[i]), optional_field(series.std_error[i])});
    return out;
}

FigureSeries parse_curve(std::string_view csv) {
    FigureSeries s;
    for (const auto& r : csv_body(csv, {"x", "mean", "std_error"})) {
        s.x.push_back(r[0]);
        s.mean.push_back(parse_optional(r[1], "mean"));
        s.std_error.push_back(parse_optional(r[2], "std_error"));
    }
    return s;
}

std::string curve_gnuplot(const FigureSeries& series, const std::string& csv_name, const std::string& x_label) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key top left\n"
       << "set xlabel '" << x_label << "'\n"
       << "set ylabel 'local codes'\n";
    int dash = 2;
    for (double line : series.reference_lines)
        gp << "set arrow from " << text::format_double(line) << ", graph 0 to " << text::format_double(line)
           << ", graph 1 nohead lc rgb 'gray' dt " << dash++ << "\n";
    const bool is_numeric = numeric(series.x);
    gp << "plot '" << csv_name << "' skip 1 using " << (is_numeric ? "1:2:3" : "0:2:3:xtic(1)")
       << " with yerrorlines title '" << series.label << "'\n";
    return gp.str();
}

std::string render_table(const TextTable& table) {
    auto check_label = [](const std::string& label) {
        if (label.find("  ") != std::string::npos || label.find_first_of("\t\n") != std::string::npos)
            throw UsageError("text table: label '" + label + "' contains a double space or control character");
    };
    check_label(table.corner);
    std::size_t label_width = table.corner.size();
    for (const auto& r : table.rows) {
        if (r.cells.size() != table.columns.size()) throw UsageError("text table: row width differs from header");
        check_label(r.label);
        label_width = std::max(label_width, r.label.size());
    }
    std::vector<std::size_t> widths;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        std::size_t w = table.columns[c].size();
        for (const auto& r : table.rows) w = std::max(w, r.cells[c].size());
        widths.push_back(w);
    }
    auto pad_left = [](const std::string& s, std::size_t w) { return std::string(w - s.size(), ' ') + s; };
    auto line = [&](const std::string& label, const std::vector<std::string>& cells) {
        std::string out = label + std::string(label_width - label.size(), ' ');
        for (std::size_t c = 0; c < cells.size(); ++c) out += "  " + pad_left(cells[c], widths[c]);
        return out + '\n';
    };
    std::string out = line(table.corner, table.columns);
    for (const auto& r : table.rows) out += line(r.label, r.cells);
    return out;
}

namespace {

// Fields of a rendered line: separated by runs of two or more spaces. A line
// starting with spaces has an empty first field.
std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    const auto n = line.size();
    while (true) {
        auto end = line.find("  ", i);
        if (end == std::string::npos) end = n;
        out.push_back(line.substr(i, end - i));
        if (end == n) break;
        i = line.find_first_not_of(' ', end);
        if (i == std::string::npos) break;
    }
    while (!out.empty() && out.size() > 1 && out.back().empty()) out.pop_back();
    return out;
}

}  // namespace

TextTable parse_table(std::string_view text) {
    TextTable t;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw DataError("text table: missing header");
    auto header = split_fields(line);
    t.corner = header.front();
    t.columns.assign(header.begin() + 1, header.end());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != t.columns.size() + 1 || fields.front().empty())
            throw DataError("text table: row '" + line + "' does not match the header");
        t.rows.push_back({fields.front(), {fields.begin() + 1, fields.end()}});
    }
    return t;
}

TextTable dropout_table(const std::vector<double>& rates, const std::vector<std::optional<LcStatistics>>& stats) {
    if (rates.size() != stats.size()) throw UsageError("dropout table: rates and statistics differ in length");
    TextTable t;
    t.corner = "No. of LCs";
    for (double r : rates) t.columns.push_back(percent_label(r));
    t.rows = {{"Minimum", {}}, {"Maximum", {}}, {"Mean", {}}, {"Standard deviation", {}}};
    for (const auto& s : stats) {
        t.rows[0].cells.push_back(s ? text::format_double(std::round(s->min)) : "-");
        t.rows[1].cells.push_back(s ? text::format_double(std::round(s->max)) : "-");
        t.rows[2].cells.push_back(s ? fixed2(s->mean) : "-");
        t.rows[3].cells.push_back(s ? fixed2(s->std_dev) : "-");
    }
    return t;
}

std::vector<DistributionRow> distribution_rows(const std::vector<double>& rates, const std::vector<Histogram>& histograms) {
    if (rates.size() != histograms.size()) throw UsageError("distribution: rates and histograms differ in length");
    std::vector<DistributionRow> rows;
    for (std::size_t i = 0; i < rates.size(); ++i)
        for (std::size_t b = 0; b < histograms[i].bin_lower.size(); ++b)
            rows.push_back({rates[i], histograms[i].bin_lower[b], histograms[i].pdf[b], histograms[i].cdf[b]});
    return rows;
}

std::string render_distribution(const std::vector<DistributionRow>& rows) {
    std::string out = text::csv_line({"rate", "bin_lower", "pdf", "cdf"});
    for (const auto& r : rows)
        out += text::csv_line({text::format_double(r.rate), text::format_double(r.bin_lower), text::format_double(r.pdf),
                               text::format_double(r.cdf)});
    return out;
}

std::vector<DistributionRow> parse_distribution(std::string_view csv) {
    std::vector<DistributionRow> rows;
    for (const auto& r : csv_body(csv, {"rate", "bin_lower", "pdf", "cdf"}))
        rows.push_back({parse_required(r[0], "rate"), parse_required(r[1], "bin_lower"), parse_required(r[2], "pdf"),
                        parse_required(r[3], "cdf")});
    return rows;
}

std::string distribution_gnuplot(const std::vector<double>& rates, const std::string& csv_name) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set multiplot layout 1,2\n"
       << "set xlabel 'local codes'\n";
    for (const char* column : {"pdf", "cdf"}) {
        gp << "set ylabel '" << column << "'\n" << "plot ";
        const int col = std::string_view(column) == "pdf" ? 3 : 4;
        for (std::size_t i = 0; i < rates.size(); ++i) {
            const auto r = text::format_double(rates[i]);
            gp << (i ? ", " : "") << "'" << csv_name << "' skip 1 using ($1==" << r << "?$2:1/0):" << col
               << " with steps title '" << percent_label(rates[i]) << "'";
        }
        gp << "\n";
    }
    gp << "unset multiplot\n";
    return gp.str();
}

std::vector<ScatterPoint> unit_scatter(const ActivationRecord& record, const SelectivityReport& report,
                                       std::size_t unit, std::uint64_t seed) {
    if (unit >= record.cols || unit >= report.units.size())
        throw UsageError("unit " + std::to_string(unit) + " does not exist");
    const auto best = report.units[unit].best_class;
    Rng rng(seed);
    std::vector<ScatterPoint> points;
    points.reserve(record.rows);
    for (std::size_t row = 0; row < record.rows; ++row)
        points.push_back({record.at(row, unit), record.class_ids[row] == best, rng.uniform_real(0.9, 1.1)});
    return points;
}

std::string render_unit_scatter(const std::vector<ScatterPoint>& points) {
    std::string out = text::csv_line({"activation", "is_best_class", "y_jitter"});
    for (const auto& p : points)
        out += text::csv_line({text::format_double(p.activation), p.is_best_class ? "1" : "0",
                               text::format_double(p.y_jitter)});
    return out;
}

std::vector<ScatterPoint> parse_unit_scatter(std::string_view csv) {
    std::vector<ScatterPoint> points;
    for (const auto& r : csv_body(csv, {"activation", "is_best_class", "y_jitter"})) {
        if (r[1] != "0" && r[1] != "1") throw DataError("is_best_class must be 0 or 1");
        points.push_back({parse_required(r[0], "activation"), r[1] == "1", parse_required(r[2], "y_jitter")});
    }
    return points;
}

namespace {
const std::vector<std::string> kRowsHeader = {"value", "repeat", "seed", "lc_count", "accuracy_ok", "wall_ms", "error"};
}

std::string render_sweep_rows(const SweepResult& result, bool with_timing) {
    std::string out = text::csv_line(kRowsHeader);
    for (const auto& r : result.rows)
        out += text::csv_line({r.value, std::to_string(r.repeat), std::to_string(r.seed),
                               r.lc_count ? std::to_string(*r.lc_count) : "", r.accuracy_ok ? "1" : "0",
                               with_timing ? text::format_double(std::round(r.wall_ms * 1000.0) / 1000.0) : "",
                               r.error});
    return out;
}

std::vector<SweepRow> parse_sweep_rows(std::string_view csv) {
    std::vector<SweepRow> rows;
    std::map<std::string, std::size_t> index;
    for (const auto& f : csv_body(csv, kRowsHeader)) {
        SweepRow r;
        r.value = f[0];
        r.value_index = index.try_emplace(f[0], index.size()).first->second;
        r.repeat = parse_count(f[1], "repeat");
        r.seed = parse_count(f[2], "seed");
        if (!f[3].empty()) r.lc_count = parse_count(f[3], "lc_count");
        if (f[4] != "0" && f[4] != "1") throw DataError("accuracy_ok must be 0 or 1");
        r.accuracy_ok = f[4] == "1";
        r.wall_ms = f[5].empty() ? 0.0 : parse_required(f[5], "wall_ms");
        r.error = f[6];
        rows.push_back(std::move(r));
    }
    return rows;
}

nlohmann::json aggregates_to_json(const SweepResult& result) {
    nlohmann::json j;
    j["parameter"] = to_string(result.parameter);
    j["values"] = result.values;
    j["repeats"] = result.repeats;
    j["master_seed"] = result.master_seed;
    j["rows_included"] = result.rows_included();
    j["rows_excluded"] = result.rows_excluded();
    auto& aggs = j["aggregates"] = nlohmann::json::array();
    for (const auto& a : result.aggregates)
        aggs.push_back({{"value", a.value}, {"included", a.included}, {"excluded", a.excluded}, {"stats", stats_json(a.stats)}});
    return j;
}

std::vector<std::filesystem::path> write_sweep_results(const std::filesystem::path& dir, const SweepResult& result,
                                                       const nlohmann::json& config, bool with_timing) {
    auto agg = aggregates_to_json(result);
    agg["config"] = config;
    const auto rows_path = dir / kRowsFile;
    const auto agg_path = dir / kAggregatesFile;
    io::write_text(rows_path, render_sweep_rows(result, with_timing));
    io::write_text(agg_path, agg.dump(2) + "\n");
    return {rows_path, agg_path};
}

LoadedSweep load_sweep_results(const std::filesystem::path& dir) {
    nlohmann::json stored;
    try {
        stored = nlohmann::json::parse(io::read_text(dir / kAggregatesFile));
    } catch (const nlohmann::json::exception& e) {
        throw DataError((dir / kAggregatesFile).string() + ": " + e.what());
    }
    LoadedSweep out;
    try {
        out.config = stored.value("config", nlohmann::json::object());
        auto& r = out.result;
        r.parameter = parse_swept_parameter(stored.at("parameter").get<std::string>());
        r.values = stored.at("values").get<std::vector<std::string>>();
        r.repeats = stored.at("repeats").get<std::size_t>();
        r.master_seed = stored.at("master_seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError((dir / kAggregatesFile).string() + ": " + e.what());
    } catch (const ConfigError& e) {
        throw DataError(e.what());
    }
    auto& r = out.result;
    r.rows = parse_sweep_rows(io::read_text(dir / kRowsFile));
    for (auto& row : r.rows) {
        const auto it = std::find(r.values.begin(), r.values.end(), row.value);
        if (it == r.values.end()) throw DataError("rows.csv: value '" + row.value + "' not in aggregates.json");
        row.value_index = static_cast<std::size_t>(it - r.values.begin());
    }
    r.aggregates = aggregate_rows(r.values, r.rows);
    auto recomputed = aggregates_to_json(r);
    for (const char* key : {"aggregates", "rows_included", "rows_excluded"})
        if (recomputed[key] != stored[key])
            throw DataError("aggregates.json disagrees with rows.csv (" + std::string(key) + ")");
    return out;
}

}  // namespace localcodes
