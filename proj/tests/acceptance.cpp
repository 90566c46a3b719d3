// Acceptance suite. Runs the twelve acceptance criteria and prints one
// PASS/FAIL line per criterion. Exit status is 0 only if every selected
// criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <thread>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "localcodes/analysis.hpp"
#include "localcodes/binary_io.hpp"
#include "localcodes/codegen.hpp"
#include "localcodes/config.hpp"
#include "localcodes/experiment.hpp"
#include "localcodes/network.hpp"
#include "localcodes/report.hpp"
#include "localcodes/rng.hpp"
#include "localcodes/text.hpp"

using namespace localcodes;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

constexpr std::size_t kStudies = 10;
constexpr std::size_t kStudiesRequired = 8;
constexpr std::size_t kPeakHidden = 200;

// Desk preset at the peak hidden size.
SweepConfig desk_study(std::uint64_t master_seed) {
    auto c = preset_config(Preset::desk);
    c.network.hidden_size = kPeakHidden;
    c.master_seed = master_seed;
    c.repeats = 10;
    return c;
}

std::size_t parallelism() { return std::max(1u, std::thread::hardware_concurrency()); }

std::optional<LcStatistics> stats_for(const SweepResult& r, std::size_t value_index) {
    return r.aggregates.at(value_index).stats;
}

void progress(std::size_t criterion, std::size_t study, const std::string& text) {
    std::cerr << "  C" << criterion << " study " << study + 1 << "/" << kStudies << ": " << text << "\n";
}

// Runs `kStudies` studies and counts how many satisfy `check`.
Outcome repeated_studies(std::size_t criterion, const std::function<bool(std::size_t, std::string&)>& study) {
    std::size_t passed = 0;
    std::string notes;
    for (std::size_t s = 0; s < kStudies; ++s) {
        std::string line;
        const bool ok = study(s, line);
        passed += ok ? 1 : 0;
        progress(criterion, s, line + (ok ? " ok" : " miss"));
    }
    return {passed >= kStudiesRequired, fmt("%zu/%zu studies satisfied (need %zu)", passed, kStudies, kStudiesRequired)};
}

// Two-value comparison study over one swept parameter.
Outcome two_value_trend(std::size_t criterion, SweptParameter parameter, std::vector<std::string> values,
                        const std::function<bool(double, double)>& holds) {
    return repeated_studies(criterion, [&](std::size_t s, std::string& line) {
        auto c = desk_study(criterion * 1000 + s);
        c.parameter = parameter;
        c.values = values;
        const auto r = run_sweep(c, parallelism());
        const auto a = stats_for(r, 0), b = stats_for(r, 1);
        if (!a || !b) {
            line = "a swept value had no converged runs";
            return false;
        }
        line = fmt("%s=%s mean %.2f (n=%zu), %s=%s mean %.2f (n=%zu)", std::string(to_string(parameter)).c_str(),
                   values[0].c_str(), a->mean, a->n, std::string(to_string(parameter)).c_str(), values[1].c_str(),
                   b->mean, b->n);
        return holds(a->mean, b->mean);
    });
}

Outcome criterion1() {
    const double lp = chance_disjoint_probability(50, 500);
    const double exponent = std::floor(lp);
    const double mantissa = std::pow(10.0, lp - exponent);
    const double rel = std::abs(mantissa - 4.32) / 4.32;
    return {rel < 0.01, fmt("1/C(500,50) = %.6fe%+.0f; mantissa relative error %.2e (tolerance 1e-2); "
                            "reference value 4.32e-71",
                            mantissa, exponent, rel)};
}

Outcome criterion2() {
    CodeSpec s;
    s.codeword_length = 12;
    s.num_classes = 3;
    s.num_codewords = 6;
    s.random_weight = 2;
    s.perturbation_rate = 0.25;
    s.seed = 1;
    const auto protos = make_prototypes(s);
    const std::vector<std::string> expected{"111100000000", "000011110000", "000000001111"};
    bool ok = protos.size() == 3;
    for (std::size_t i = 0; ok && i < 3; ++i) ok = protos[i].to_string() == expected[i];
    for (std::size_t i = 0; ok && i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) ok = ok && hamming(protos[i], protos[j]) == 8;
    Rng rng(7);
    std::size_t draws = 0;
    for (std::size_t k = 0; ok && k < 3; ++k)
        for (int t = 0; t < 1000; ++t, ++draws) {
            const auto p = perturb_prototype(protos[k], 0.25, rng);
            if (hamming(p.bits, protos[k]) != 1 || p.bits.count() != 3 || p.cleared.size() != 1) ok = false;
        }
    // Full codewords keep the class block minus one bit plus w_R fill bits.
    const auto ds = generate_dataset(s, OutputCoding::distributed);
    for (const auto& cw : ds.codewords) ok = ok && cw.bits.count() == 3 + 2;
    return {ok, fmt("prototypes %s/%s/%s, pairwise distance 8, %zu perturbations each cleared one bit",
                    expected[0].c_str(), expected[1].c_str(), expected[2].c_str(), draws)};
}

Outcome criterion3() {
    const auto rows = text::parse_csv(io::read_text(std::string(LOCALCODES_FIXTURE_DIR) + "/dropout_table_counts.csv"));
    std::map<double, std::vector<std::size_t>> by_rate;
    for (std::size_t i = 1; i < rows.size(); ++i)
        by_rate[text::parse_double(rows[i].at(0), "rate")].push_back(text::parse_u64(rows[i].at(1), "count"));
    std::vector<double> rates;
    std::vector<std::optional<LcStatistics>> stats;
    for (const auto& [rate, counts] : by_rate) {
        rates.push_back(rate);
        stats.push_back(lc_statistics(counts));
    }
    const std::string rendered = render_table(dropout_table(rates, stats));
    const std::string reference =
        "No. of LCs             0%    20%    50%    70%    90%\n"
        "Minimum                 8      4      7     15      0\n"
        "Maximum                34     29     41     57    125\n"
        "Mean                18.44  16.13  20.65  34.54  73.80\n"
        "Standard deviation   4.55   4.19   4.96   8.05  24.53\n";
    const bool table_ok = rendered == reference;
    if (!table_ok) std::cerr << "rendered table:\n" << rendered << "expected:\n" << reference;

    // Hand-arithmetic oracle.
    struct Case {
        std::vector<double> xs;
        double min, max, mean, sd;
    };
    const std::vector<Case> cases{
        {{2, 4, 4, 4, 5, 5, 7, 9}, 2, 9, 5.0, 2.138089935299395},  // sqrt(32/7)
        {{1, 2, 3, 4}, 1, 4, 2.5, 1.2909944487358056},             // sqrt(5/3)
        {{0, 125}, 0, 125, 62.5, 88.38834764831844},               // 125/sqrt(2)
        {{7}, 7, 7, 7.0, 0.0},
        {{8, 34, 18}, 8, 34, 20.0, 13.114877048604},  // sqrt(172)
    };
    double worst = 0.0;
    for (const auto& c : cases) {
        const auto st = lc_statistics(std::span<const double>(c.xs));
        for (auto [got, want] : {std::pair{st.min, c.min}, {st.max, c.max}, {st.mean, c.mean}, {st.std_dev, c.sd}})
            worst = std::max(worst, std::abs(got - want));
    }
    const bool oracle_ok = worst <= 1e-12;
    return {table_ok && oracle_ok,
            fmt("fixture table %s reference table; hand oracle max abs error %.1e (tolerance 1e-12)",
                table_ok ? "matches" : "differs from", worst)};
}

// Exhaustive (unit, class, polarity) scan, independent of the library.
std::vector<bool> oracle_local_codes(const ActivationRecord& r, double threshold) {
    std::vector<bool> out(r.cols, false);
    for (std::size_t u = 0; u < r.cols; ++u)
        for (std::size_t c = 0; c < r.num_classes; ++c) {
            double min_a = 1e300, max_a = -1e300, min_n = 1e300, max_n = -1e300;
            for (std::size_t i = 0; i < r.rows; ++i) {
                const double v = r.at(i, u);
                auto& lo = r.class_ids[i] == c ? min_a : min_n;
                auto& hi = r.class_ids[i] == c ? max_a : max_n;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            for (double gap : {min_a - max_n, min_n - max_a})
                if (gap > 0.0 && gap >= threshold) out[u] = true;
        }
    return out;
}

Outcome criterion4() {
    Rng rng(4040);
    std::size_t units = 0, mismatches = 0, positives = 0;
    for (int t = 0; t < 100; ++t) {
        ActivationRecord r;
        r.num_classes = 2 + rng.uniform_index(9);
        r.rows = r.num_classes * (1 + rng.uniform_index(200 / r.num_classes));
        r.cols = 1 + rng.uniform_index(20);
        for (std::size_t i = 0; i < r.rows; ++i) r.class_ids.push_back(i % r.num_classes);
        r.values.resize(r.rows * r.cols);
        for (auto& v : r.values) v = rng.uniform_real();
        // Plant separated units so both outcomes occur.
        for (std::size_t u = 0; u < r.cols; ++u) {
            if (rng.bernoulli(0.5)) continue;
            const auto c = rng.uniform_index(r.num_classes);
            const double gap = rng.uniform_real(0.0, 0.1);
            const bool on = rng.bernoulli(0.5);
            for (std::size_t i = 0; i < r.rows; ++i) {
                auto& v = r.values[i * r.cols + u];
                const bool in = r.class_ids[i] == c;
                v = (in == on) ? 0.5 + gap + 0.4 * v : 0.5 * v;
            }
        }
        const auto rep = count_local_codes(r, kDefaultThreshold);
        const auto want = oracle_local_codes(r, kDefaultThreshold);
        std::size_t count = 0;
        for (std::size_t u = 0; u < r.cols; ++u) {
            mismatches += rep.units[u].is_local_code() != want[u] ? 1 : 0;
            count += want[u] ? 1 : 0;
        }
        mismatches += rep.local_code_count != count ? 1 : 0;
        units += r.cols;
        positives += count;
    }
    return {mismatches == 0, fmt("100 records, %zu units (%zu local codes), %zu mismatches", units, positives, mismatches)};
}

Outcome criterion5() {
    Rng rng(5050);
    double worst = 0.0;
    std::size_t nets = 0;
    for (auto act : {Activation::sigmoid, Activation::relu}) {
        std::size_t done = 0;
        while (done < 10) {
            NetworkConfig c;
            c.input_size = 2 + rng.uniform_index(7);
            c.hidden_size = 2 + rng.uniform_index(7);
            c.output_size = 1 + rng.uniform_index(4);
            c.hidden_activation = act;
            c.loss = rng.bernoulli(0.5) ? LossKind::mse : LossKind::cross_entropy;
            auto net = TrainedNetwork::zeros(c);
            for (auto* m : {&net.w1, &net.w2})
                for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = rng.uniform_real(-1.0, 1.0);
            for (auto* v : {&net.b1, &net.b2})
                for (Eigen::Index i = 0; i < v->size(); ++i) v->data()[i] = rng.uniform_real(-1.0, 1.0);
            const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.uniform_index(6));
            Eigen::MatrixXd x(n, static_cast<Eigen::Index>(c.input_size));
            Eigen::MatrixXd t(n, static_cast<Eigen::Index>(c.output_size));
            for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
            for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
            if (act == Activation::relu) {
                // Finite differences are undefined across the relu kink.
                const Eigen::MatrixXd z = (x * net.w1.transpose()).rowwise() + net.b1.transpose();
                if (z.cwiseAbs().minCoeff() < 1e-2) continue;
            }
            worst = std::max(worst, gradient_check(net, x, t));
            ++done;
            ++nets;
        }
    }
    return {worst < 1e-4, fmt("%zu networks (10 sigmoid, 10 relu), max relative error %.2e (tolerance 1e-4)", nets, worst)};
}

Outcome criterion6() {
    return two_value_trend(6, SweptParameter::num_codewords, {"50", "100"},
                           [](double small, double large) { return small >= large; });
}

Outcome criterion7() {
    auto trend = two_value_trend(7, SweptParameter::random_weight, {"8", "30"},
                                 [](double sparse, double dense) { return sparse > dense; });
    // Distance audit at the sparsest setting, over every dataset the first study used.
    auto c = desk_study(7000);
    c.parameter = SweptParameter::random_weight;
    c.values = {"8"};
    std::size_t overlapping = 0;
    for (std::size_t r = 0; r < c.repeats; ++r) {
        const auto cell = resolve_cell(c, 0, r);
        overlapping += distance_audit(generate_dataset(cell.code, cell.output_coding)).overlap ? 1 : 0;
    }
    trend.pass = trend.pass && overlapping == 0;
    trend.detail += fmt("; w_R=8 distance audit: %zu/%zu datasets overlap", overlapping, c.repeats);
    return trend;
}

Outcome criterion8() {
    return two_value_trend(8, SweptParameter::output_coding, {"distributed", "one_hot"},
                           [](double distributed, double one_hot) { return one_hot <= 0.5 * distributed; });
}

Outcome criterion9() {
    const std::vector<double> rates{0.0, 0.1, 0.2, 0.3, 0.4};
    return repeated_studies(9, [&](std::size_t s, std::string& line) {
        const auto study = perturbation_study(desk_study(9000 + s), rates, 10, parallelism());
        if (!study.fit || study.curve.size() != rates.size()) {
            line = "fit unavailable: " + study.fit_error;
            return false;
        }
        const double first = study.curve.front().mean, last = study.curve.back().mean;
        line = fmt("mean %.2f -> %.2f, b=%.2f, R^2=%.3f", first, last, study.fit->slope, study.fit->r_squared);
        return first > last && study.fit->slope < 0.0 && study.fit->r_squared > 0.8;
    });
}

Outcome criterion10() {
    std::size_t mean_up = 0, sd_up = 0;
    auto out = repeated_studies(10, [&](std::size_t s, std::string& line) {
        const auto study = dropout_study(desk_study(10000 + s), {0.0, 0.9}, 20, parallelism());
        const auto& lo = study.rates[0].stats;
        const auto& hi = study.rates[1].stats;
        if (!lo || !hi || lo->n < 2 || hi->n < 2) {
            line = "too few converged runs";
            return false;
        }
        line = fmt("0%%: mean %.2f sd %.2f (n=%zu); 90%%: mean %.2f sd %.2f (n=%zu)", lo->mean, lo->std_dev, lo->n,
                   hi->mean, hi->std_dev, hi->n);
        mean_up += hi->mean > lo->mean ? 1 : 0;
        sd_up += hi->std_dev > lo->std_dev ? 1 : 0;
        return hi->mean > lo->mean && hi->std_dev > lo->std_dev;
    });
    out.detail += fmt("; mean higher in %zu/%zu, sd higher in %zu/%zu", mean_up, kStudies, sd_up, kStudies);
    return out;
}

Outcome criterion11() {
    auto c = preset_config(Preset::desk);
    c.repeats = 3;
    c.network.epochs = 1000;
    c.master_seed = 11011;
    const auto serial = run_sweep(c, 1);
    const auto threaded = run_sweep(c, 8);
    const auto a = render_sweep_rows(serial, false), b = render_sweep_rows(threaded, false);
    const bool same_aggregates = aggregates_to_json(serial).dump() == aggregates_to_json(threaded).dump();
    return {a == b && same_aggregates,
            fmt("%zu rows; CSV rows %s, aggregates %s (wall-clock column excluded)", serial.rows.size(),
                a == b ? "identical" : "differ", same_aggregates ? "identical" : "differ")};
}

Outcome criterion12() {
    auto c = desk_study(12000);
    c.values = {std::to_string(kPeakHidden)};
    std::size_t runs_with_code = 0;
    double best_gap = 0.0;
    for (std::size_t r = 0; r < 10; ++r) {
        const auto cell = resolve_cell(c, 0, r);
        const auto ds = generate_dataset(cell.code, cell.output_coding);
        auto net = cell.network;
        net.input_size = ds.input_size();
        net.output_size = ds.output_size();
        const auto trained = train(ds, net);
        const auto& rec = trained.activations;
        const auto rep = count_local_codes(rec, kDefaultThreshold);
        bool found = false;
        // Certify each reported local code directly from the activations.
        for (std::size_t u = 0; u < rec.cols; ++u)
            for (const auto& [cls, pol] : rep.units[u].qualifying) {
                double min_a = 1e300, max_a = -1e300, min_n = 1e300, max_n = -1e300;
                for (std::size_t i = 0; i < rec.rows; ++i) {
                    const double v = rec.at(i, u);
                    if (rec.class_ids[i] == cls) {
                        min_a = std::min(min_a, v);
                        max_a = std::max(max_a, v);
                    } else {
                        min_n = std::min(min_n, v);
                        max_n = std::max(max_n, v);
                    }
                }
                const double gap = pol == Polarity::on ? min_a - max_n : min_n - max_a;
                if (gap > 0.0 && gap >= kDefaultThreshold) {
                    found = true;
                    best_gap = std::max(best_gap, gap);
                }
            }
        runs_with_code += found ? 1 : 0;
        std::cerr << "  C12 run " << r + 1 << "/10: " << rep.local_code_count << " local codes\n";
    }
    return {runs_with_code >= 1,
            fmt("%zu/10 desk runs contain a certified disjoint unit; largest gap %.3f (threshold 0.05)", runs_with_code,
                best_gap)};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Outcome()>>> list{
        {"chance probability of a disjoint unit", criterion1},
        {"toy code construction", criterion2},
        {"dropout table statistics", criterion3},
        {"local code count vs brute force", criterion4},
        {"gradient check", criterion5},
        {"fewer codewords give more local codes", criterion6},
        {"sparser random fill gives more local codes", criterion7},
        {"one-hot output halves local codes", criterion8},
        {"perturbation lowers local codes", criterion9},
        {"dropout raises mean and spread", criterion10},
        {"sweep independent of parallelism", criterion11},
        {"local codes emerge", criterion12},
    };
    return list;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<std::size_t> selected;
    app.add_option("--criterion", selected, "Criterion number (repeatable); default all")
        ->check(CLI::Range(std::size_t{1}, criteria().size()));
    CLI11_PARSE(app, argc, argv);
    if (selected.empty())
        for (std::size_t i = 1; i <= criteria().size(); ++i) selected.push_back(i);

    bool all = true;
    for (auto n : selected) {
        const auto& [name, fn] = criteria()[n - 1];
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (out.pass ? "PASS" : "FAIL") << "  C" << n << "  " << name << ": " << out.detail
                  << fmt(" [%.1fs]", secs) << std::endl;
        all = all && out.pass;
    }
    return all ? 0 : 1;
}
