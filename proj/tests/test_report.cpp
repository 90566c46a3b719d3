#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "localcodes/binary_io.hpp"
#include "localcodes/errors.hpp"
#include "localcodes/report.hpp"
#include "localcodes/rng.hpp"

using namespace localcodes;

namespace {

SweepResult three_point_result() {
    SweepResult r;
    r.parameter = SweptParameter::hidden_size;
    r.values = {"25", "50", "100"};
    r.repeats = 2;
    r.master_seed = 4;
    const std::size_t counts[3][2] = {{3, 5}, {10, 14}, {20, 21}};
    for (std::size_t v = 0; v < 3; ++v)
        for (std::size_t k = 0; k < 2; ++k) {
            SweepRow row;
            row.value_index = v;
            row.value = r.values[v];
            row.repeat = k;
            row.seed = 1000 + v * 10 + k;
            row.lc_count = counts[v][k];
            row.accuracy_ok = true;
            row.wall_ms = 12.5 + static_cast<double>(v);
            r.rows.push_back(row);
        }
    r.aggregates = aggregate_rows(r.values, r.rows);
    return r;
}

ActivationRecord record_with(std::vector<double> column, std::size_t classes) {
    ActivationRecord r;
    r.rows = column.size();
    r.cols = 1;
    r.num_classes = classes;
    r.values = std::move(column);
    for (std::size_t i = 0; i < r.rows; ++i) r.class_ids.push_back(i % classes);
    return r;
}

}  // namespace

TEST(Curve, ThreePointCsv) {
    const auto series = series_from_sweep(three_point_result(), "n_hln");
    const auto csv = render_curve(series);
    EXPECT_EQ(csv,
              "x,mean,std_error\n"
              "25,4,1\n"
              "50,12,2\n"
              "100,20.5,0.5\n");
}

TEST(Curve, RoundTripIsExact) {
    FigureSeries s;
    s.x = {"0.1", "0.2", "0.30000000000000004"};
    s.mean = {1.0 / 3.0, std::nullopt, 2.0 / 7.0};
    s.std_error = {0.1, std::nullopt, 1e-17};
    const auto csv = render_curve(s);
    const auto back = parse_curve(csv);
    EXPECT_EQ(back.x, s.x);
    EXPECT_EQ(back.mean, s.mean);
    EXPECT_EQ(back.std_error, s.std_error);
    EXPECT_EQ(render_curve(back), csv);
    EXPECT_NE(csv.find("0.2,,\n"), std::string::npos);
}

TEST(Curve, MissingAggregatesAreEmptyFields) {
    auto r = three_point_result();
    for (auto& row : r.rows)
        if (row.value_index == 1) row.accuracy_ok = false;
    r.aggregates = aggregate_rows(r.values, r.rows);
    EXPECT_NE(render_curve(series_from_sweep(r, "x")).find("\n50,,\n"), std::string::npos);
}

TEST(Curve, EmptyResultIsUsageError) {
    EXPECT_THROW(series_from_sweep(SweepResult{}, "x"), UsageError);
    FigureSeries ragged;
    ragged.x = {"1"};
    EXPECT_THROW(render_curve(ragged), UsageError);
}

TEST(Curve, NonFiniteValuesAreNeverWritten) {
    FigureSeries s;
    s.x = {"1"};
    s.mean = {std::numeric_limits<double>::quiet_NaN()};
    s.std_error = {0.0};
    EXPECT_THROW(render_curve(s), DataError);
}

TEST(Curve, GnuplotScriptHasReferenceLines) {
    auto s = series_from_sweep(three_point_result(), "n_hln");
    s.reference_lines = {100, 200};
    const auto gp = curve_gnuplot(s, "curve.csv", "hidden units");
    EXPECT_NE(gp.find("set arrow from 100"), std::string::npos);
    EXPECT_NE(gp.find("set arrow from 200"), std::string::npos);
    EXPECT_NE(gp.find("'curve.csv'"), std::string::npos);
}

TEST(Table, DropoutLayout) {
    const std::vector<double> rates{0.0, 0.9};
    const auto a = lc_statistics(std::vector<double>{8, 34, 18});
    const auto table = dropout_table(rates, {a, std::nullopt});
    const auto text = render_table(table);
    EXPECT_EQ(text,
              "No. of LCs             0%  90%\n"
              "Minimum                 8    -\n"
              "Maximum                34    -\n"
              "Mean                20.00    -\n"
              "Standard deviation  13.11    -\n");
    const auto parsed = parse_table(text);
    EXPECT_EQ(parsed, table);
    EXPECT_EQ(render_table(parsed), text);
    EXPECT_EQ(parsed.columns, (std::vector<std::string>{"0%", "90%"}));
    EXPECT_EQ(parsed.rows[0].label, "Minimum");
    EXPECT_EQ(parsed.rows[3].label, "Standard deviation");
    EXPECT_EQ(parsed.rows[2].cells[0], "20.00");
    EXPECT_EQ(parsed.rows[3].cells[0], "13.11");
    EXPECT_EQ(parsed.rows[0].cells[1], "-");
    EXPECT_EQ(parsed.corner, "No. of LCs");
}

TEST(Table, EmptyCornerAndBadLabels) {
    TextTable t{"", {"a", "b"}, {{"row one", {"1", "2"}}}};
    const auto text = render_table(t);
    EXPECT_EQ(text, "         a  b\nrow one  1  2\n");
    EXPECT_EQ(parse_table(text), t);
    t.rows[0].label = "two  spaces";
    EXPECT_THROW(render_table(t), UsageError);
    EXPECT_THROW(parse_table("x  a  b\nrow  1\n"), DataError);
}

TEST(Table, SingleRateEqualsStatistics) {
    const std::vector<std::size_t> counts{12, 7, 30, 18, 18, 22, 9};
    const auto stats = lc_statistics(counts);
    const auto table = dropout_table({0.0}, {stats});
    char mean[32], sd[32];
    std::snprintf(mean, sizeof mean, "%.2f", stats.mean);
    std::snprintf(sd, sizeof sd, "%.2f", stats.std_dev);
    EXPECT_EQ(table.rows[0].cells[0], "7");
    EXPECT_EQ(table.rows[1].cells[0], "30");
    EXPECT_EQ(table.rows[2].cells[0], mean);
    EXPECT_EQ(table.rows[3].cells[0], sd);
}

TEST(Distribution, RoundTrip) {
    const auto h0 = histogram(std::vector<std::size_t>{3, 4, 4, 9}, 2);
    const auto h1 = histogram(std::vector<std::size_t>{50, 51, 70}, 2);
    const auto rows = distribution_rows({0.0, 0.9}, {h0, h1});
    const auto csv = render_distribution(rows);
    EXPECT_EQ(parse_distribution(csv), rows);
    EXPECT_EQ(render_distribution(parse_distribution(csv)), csv);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "rate,bin_lower,pdf,cdf");
    EXPECT_NE(distribution_gnuplot({0.0, 0.9}, "d.csv").find("'90%'"), std::string::npos);
}

TEST(Scatter, ConstantUnitHasEqualActivations) {
    const auto rec = record_with(std::vector<double>(12, 0.7), 3);
    const auto rep = count_local_codes(rec);
    const auto pts = unit_scatter(rec, rep, 0, 1);
    ASSERT_EQ(pts.size(), 12u);
    for (const auto& p : pts) {
        EXPECT_EQ(p.activation, 0.7);
        EXPECT_GE(p.y_jitter, 0.9);
        EXPECT_LE(p.y_jitter, 1.1);
    }
}

TEST(Scatter, SelectiveUnitIsSeparableByAVerticalLine) {
    Rng rng(3);
    std::vector<double> col(30);
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = i % 3 == 1 ? rng.uniform_real(0.6, 0.9) : rng.uniform_real(0.0, 0.4);
    const auto rec = record_with(col, 3);
    const auto rep = count_local_codes(rec);
    ASSERT_TRUE(rep.units[0].is_local_code());
    const auto pts = unit_scatter(rec, rep, 0, 5);
    double min_red = 1e9, max_blue = -1e9;
    for (const auto& p : pts) {
        if (p.is_best_class) min_red = std::min(min_red, p.activation);
        else max_blue = std::max(max_blue, p.activation);
    }
    EXPECT_GT(min_red, max_blue);
}

TEST(Scatter, JitterIsReproducible) {
    Rng rng(4);
    std::vector<double> col(40);
    for (auto& v : col) v = rng.uniform_real();
    const auto rec = record_with(col, 4);
    const auto rep = count_local_codes(rec);
    const auto a = render_unit_scatter(unit_scatter(rec, rep, 0, 77));
    const auto b = render_unit_scatter(unit_scatter(rec, rep, 0, 77));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, render_unit_scatter(unit_scatter(rec, rep, 0, 78)));
    EXPECT_EQ(render_unit_scatter(parse_unit_scatter(a)), a);
}

TEST(Scatter, UnknownUnitIsUsageError) {
    const auto rec = record_with(std::vector<double>(6, 0.1), 2);
    const auto rep = count_local_codes(rec);
    EXPECT_THROW(unit_scatter(rec, rep, 1, 0), UsageError);
}

TEST(SweepRows, RoundTrip) {
    auto r = three_point_result();
    r.rows[1].lc_count.reset();
    r.rows[1].error = "diverged, \"badly\"";
    r.rows[2].accuracy_ok = false;
    const auto csv = render_sweep_rows(r);
    const auto rows = parse_sweep_rows(csv);
    ASSERT_EQ(rows.size(), r.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].value, r.rows[i].value);
        EXPECT_EQ(rows[i].value_index, r.rows[i].value_index);
        EXPECT_EQ(rows[i].seed, r.rows[i].seed);
        EXPECT_EQ(rows[i].lc_count, r.rows[i].lc_count);
        EXPECT_EQ(rows[i].accuracy_ok, r.rows[i].accuracy_ok);
        EXPECT_EQ(rows[i].wall_ms, r.rows[i].wall_ms);
        EXPECT_EQ(rows[i].error, r.rows[i].error);
    }
    SweepResult again = r;
    again.rows = rows;
    EXPECT_EQ(render_sweep_rows(again), csv);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "value,repeat,seed,lc_count,accuracy_ok,wall_ms,error");
}

TEST(SweepRows, MalformedCsvIsDataError) {
    EXPECT_THROW(parse_sweep_rows("a,b\n"), DataError);
    EXPECT_THROW(parse_sweep_rows("value,repeat,seed,lc_count,accuracy_ok,wall_ms,error\n1,0,5,3,maybe,,\n"), DataError);
}

TEST(SweepResults, TamperedAggregatesAreDetected) {
    const auto r = three_point_result();
    const auto dir = std::filesystem::temp_directory_path() / "localcodes_test_report";
    std::filesystem::remove_all(dir);
    write_sweep_results(dir, r, nlohmann::json::object());
    EXPECT_NO_THROW(load_sweep_results(dir));
    auto csv = render_sweep_rows(r);
    csv.replace(csv.find(",21,"), 4, ",22,");
    io::write_text(dir / kRowsFile, csv);
    EXPECT_THROW(load_sweep_results(dir), DataError);
    std::filesystem::remove_all(dir);
}
