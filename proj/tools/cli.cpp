#include "localcodes/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "localcodes/analysis.hpp"
#include "localcodes/binary_io.hpp"
#include "localcodes/config.hpp"
#include "localcodes/dataset_io.hpp"
#include "localcodes/errors.hpp"
#include "localcodes/manifest.hpp"
#include "localcodes/network.hpp"
#include "localcodes/report.hpp"
#include "localcodes/text.hpp"

namespace localcodes::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string preset = "desk";
    std::string config_path;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;

    bool has_seed() const { return seed_opt && seed_opt->count() > 0; }
};

fs::path results_dir() {
    const char* env = std::getenv(kResultsDirEnv);
    return env && *env ? fs::path(env) : fs::path("results");
}

fs::path directory_of(const fs::path& file) {
    return file.has_parent_path() ? file.parent_path() : fs::path(".");
}

// preset, then config file, then flags (applied by the caller).
SweepConfig base_config(const Globals& g) {
    auto config = preset_config(parse_preset(g.preset));
    if (!g.config_path.empty()) apply_config_file(config, g.config_path);
    return config;
}

RunRecord new_run(const std::string& subcommand, const std::vector<std::string>& args, const nlohmann::json& config,
                  std::uint64_t seed) {
    RunRecord r;
    r.tool_version = LOCALCODES_VERSION;
    r.subcommand = subcommand;
    r.argv = args;
    r.config = config;
    r.seed = seed;
    return r;
}

FileDigest digest(const fs::path& p) { return {p.string(), sha256_file(p)}; }

template <typename T>
bool given(CLI::App* app, const char* name, T& target, const T& value) {
    if (app->count(name) == 0) return false;
    target = value;
    return true;
}

const std::vector<std::string> kActivations = {"sigmoid", "relu"};
const std::vector<std::string> kCodings = {"distributed", "one_hot"};
const std::vector<std::string> kOptimizers = {"sgd", "adam"};
const std::vector<std::string> kLosses = {"mse", "cross_entropy"};

struct Context {
    Globals globals;
    std::vector<std::string> args;
    std::ostream& out;
};

// ---- generate -------------------------------------------------------------

struct GenerateOpts {
    std::size_t length = 0, classes = 0, count = 0, random_weight = 0;
    double perturbation = 0.0;
    std::string coding;
    std::string output;
    std::string json;
};

void add_generate(CLI::App& app, GenerateOpts& o) {
    app.add_option("--length", o.length, "Codeword length L_x");
    app.add_option("--classes", o.classes, "Number of classes n_P");
    app.add_option("--count", o.count, "Number of codewords n_x");
    app.add_option("--random-weight", o.random_weight, "Random fill weight w_R");
    app.add_option("--perturbation", o.perturbation, "Prototype perturbation rate P")->check(CLI::Range(0.0, 1.0));
    app.add_option("--output-coding", o.coding, "distributed|one_hot")->check(CLI::IsMember(kCodings));
    app.add_option("-o,--output", o.output, "Dataset file (default: $" + std::string(kResultsDirEnv) + "/dataset.bin)");
    app.add_option("--json", o.json, "Also write a JSON export to this path");
}

int run_generate(Context& ctx, CLI::App* sub, const GenerateOpts& o) {
    auto config = base_config(ctx.globals);
    given(sub, "--length", config.code.codeword_length, o.length);
    given(sub, "--classes", config.code.num_classes, o.classes);
    given(sub, "--count", config.code.num_codewords, o.count);
    given(sub, "--random-weight", config.code.random_weight, o.random_weight);
    given(sub, "--perturbation", config.code.perturbation_rate, o.perturbation);
    if (sub->count("--output-coding")) config.output_coding = parse_output_coding(o.coding);
    if (ctx.globals.has_seed()) config.code.seed = ctx.globals.seed;
    config.code.validate();

    const fs::path output = o.output.empty() ? results_dir() / "dataset.bin" : fs::path(o.output);
    ManifestWriter manifest(directory_of(output), new_run("generate", ctx.args, config_to_json(config), config.code.seed));
    try {
        const auto dataset = generate_dataset(config.code, config.output_coding);
        save_dataset(dataset, output);
        std::vector<fs::path> outputs{output};
        if (!o.json.empty()) {
            io::write_text(o.json, dataset_to_json(dataset));
            outputs.emplace_back(o.json);
        }
        manifest.finish(outputs);
        ctx.out << "wrote " << dataset.codewords.size() << " codewords to " << output.string() << "\n";
    } catch (const std::exception& e) {
        manifest.fail(e.what());
        throw;
    }
    return kExitOk;
}

// ---- train ----------------------------------------------------------------

struct TrainOpts {
    std::string dataset;
    std::size_t hidden = 0, epochs = 0, batch_size = 0;
    std::string activation, optimizer, loss;
    double dropout = 0.0, learning_rate = 0.0;
    std::string output;
    std::string activations;
};

void add_train(CLI::App& app, TrainOpts& o) {
    app.add_option("--dataset", o.dataset, "Dataset file")->required();
    app.add_option("--hidden", o.hidden, "Hidden layer size n_HLN");
    app.add_option("--activation", o.activation, "sigmoid|relu")->check(CLI::IsMember(kActivations));
    app.add_option("--dropout", o.dropout, "Hidden dropout rate")->check(CLI::Range(0.0, 1.0));
    app.add_option("--epochs", o.epochs, "Training epochs");
    app.add_option("--learning-rate", o.learning_rate, "Learning rate");
    app.add_option("--batch-size", o.batch_size, "Minibatch size (0 = full batch)");
    app.add_option("--optimizer", o.optimizer, "sgd|adam")->check(CLI::IsMember(kOptimizers));
    app.add_option("--loss", o.loss, "mse|cross_entropy")->check(CLI::IsMember(kLosses));
    app.add_option("-o,--output", o.output, "Checkpoint file (default: $" + std::string(kResultsDirEnv) + "/model.bin)");
    app.add_option("--activations", o.activations, "Hidden activation file (default: next to the checkpoint)");
}

int run_train(Context& ctx, CLI::App* sub, const TrainOpts& o) {
    auto config = base_config(ctx.globals);
    auto& net = config.network;
    given(sub, "--hidden", net.hidden_size, o.hidden);
    given(sub, "--epochs", net.epochs, o.epochs);
    given(sub, "--batch-size", net.batch_size, o.batch_size);
    given(sub, "--dropout", net.dropout_rate, o.dropout);
    given(sub, "--learning-rate", net.learning_rate, o.learning_rate);
    if (sub->count("--activation")) net.hidden_activation = parse_activation(o.activation);
    if (sub->count("--optimizer")) net.optimizer = parse_optimizer(o.optimizer);
    if (sub->count("--loss")) net.loss = parse_loss(o.loss);
    if (ctx.globals.has_seed()) net.init_seed = ctx.globals.seed;

    const fs::path dataset_path = o.dataset;
    const auto dataset = load_dataset(dataset_path);
    config.code = dataset.spec;
    config.output_coding = dataset.output_coding;
    net.input_size = dataset.input_size();
    net.output_size = dataset.output_size();
    net.validate();

    const fs::path output = o.output.empty() ? results_dir() / "model.bin" : fs::path(o.output);
    const fs::path acts = o.activations.empty() ? directory_of(output) / "activations.bin" : fs::path(o.activations);
    auto run = new_run("train", ctx.args, config_to_json(config), net.init_seed);
    run.inputs.push_back(digest(dataset_path));
    ManifestWriter manifest(directory_of(output), std::move(run));
    try {
        const auto outcome = train(dataset, net);
        save_network(outcome.network, output);
        save_activations(outcome.activations, acts);
        manifest.finish({output, acts});
        ctx.out << "trained " << outcome.network.epochs_run << " epochs, final loss "
                << text::format_double(outcome.network.final_loss) << ", full accuracy "
                << (outcome.network.reached_full_accuracy ? "yes" : "no") << "\n";
    } catch (const std::exception& e) {
        manifest.fail(e.what());
        throw;
    }
    return kExitOk;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeOpts {
    std::string activations;
    std::string dataset;
    double threshold = kDefaultThreshold;
    std::string output;
    std::size_t scatter_unit = 0;
    std::string scatter_out;
};

void add_analyze(CLI::App& app, AnalyzeOpts& o) {
    app.add_option("--activations", o.activations, "Hidden activation file")->required();
    app.add_option("--dataset", o.dataset, "Dataset the activations were recorded on (checked for consistency)");
    app.add_option("--threshold", o.threshold, "Minimum selectivity gap");
    app.add_option("-o,--output", o.output, "Report JSON (default: $" + std::string(kResultsDirEnv) + "/report.json)");
    app.add_option("--scatter-unit", o.scatter_unit, "Unit to export as a jitter-plot CSV");
    app.add_option("--scatter-out", o.scatter_out, "Jitter-plot CSV path (default: unit_<id>.csv next to the report)");
}

int run_analyze(Context& ctx, CLI::App* sub, const AnalyzeOpts& o) {
    auto config = base_config(ctx.globals);
    given(sub, "--threshold", config.threshold, o.threshold);
    const fs::path acts_path = o.activations;
    const auto record = load_activations(acts_path);

    std::vector<FileDigest> inputs{digest(acts_path)};
    if (!o.dataset.empty()) {
        const auto dataset = load_dataset(o.dataset);
        if (dataset.codewords.size() != record.rows) throw DataError("activation rows do not match dataset size");
        for (std::size_t i = 0; i < record.rows; ++i)
            if (dataset.codewords[i].class_id != record.class_ids[i])
                throw DataError("activation class ids do not match the dataset");
        inputs.push_back(digest(o.dataset));
    }

    const fs::path output = o.output.empty() ? results_dir() / "report.json" : fs::path(o.output);
    const std::uint64_t seed = ctx.globals.has_seed() ? ctx.globals.seed : 0;
    auto run = new_run("analyze", ctx.args, config_to_json(config), seed);
    run.inputs = inputs;
    ManifestWriter manifest(directory_of(output), std::move(run));
    try {
        const auto report = count_local_codes(record, config.threshold);
        io::write_text(output, selectivity_report_json(report));
        std::vector<fs::path> outputs{output};
        if (sub->count("--scatter-unit")) {
            const fs::path scatter = o.scatter_out.empty()
                                         ? directory_of(output) / ("unit_" + std::to_string(o.scatter_unit) + ".csv")
                                         : fs::path(o.scatter_out);
            io::write_text(scatter, render_unit_scatter(unit_scatter(record, report, o.scatter_unit, seed)));
            outputs.push_back(scatter);
        }
        manifest.finish(outputs);
        ctx.out << "local codes: " << report.local_code_count << " of " << report.units.size() << " units ("
                << report.selectively_on << " on, " << report.selectively_off << " off)\n";
    } catch (const std::exception& e) {
        manifest.fail(e.what());
        throw;
    }
    return kExitOk;
}

// ---- sweep ----------------------------------------------------------------

struct SweepOpts {
    std::string parameter;
    std::vector<std::string> values;
    std::size_t repeats = 0;
    std::size_t epochs = 0;
    bool fixed_dataset = false;
    std::size_t parallel = 1;
    bool no_timing = false;
    std::string output;
};

void add_sweep(CLI::App& app, SweepOpts& o) {
    std::vector<std::string> params;
    for (auto p : {SweptParameter::hidden_size, SweptParameter::num_codewords, SweptParameter::random_weight,
                   SweptParameter::perturbation_rate, SweptParameter::dropout_rate, SweptParameter::hidden_activation,
                   SweptParameter::output_coding})
        params.emplace_back(to_string(p));
    app.add_option("--parameter", o.parameter, "Swept parameter")->check(CLI::IsMember(params));
    app.add_option("--values", o.values, "Swept values (comma separated)")->delimiter(',');
    app.add_option("--repeats", o.repeats, "Runs per swept value");
    app.add_option("--epochs", o.epochs, "Training epochs per run");
    app.add_flag("--fixed-dataset", o.fixed_dataset, "Reuse one dataset per swept value");
    app.add_option("--parallel", o.parallel, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--no-timing", o.no_timing, "Leave wall_ms empty in rows.csv");
    app.add_option("-o,--output", o.output, "Results directory (default: $" + std::string(kResultsDirEnv) + ")");
}

int run_sweep_cmd(Context& ctx, CLI::App* sub, const SweepOpts& o) {
    auto config = base_config(ctx.globals);
    if (sub->count("--parameter")) config.parameter = parse_swept_parameter(o.parameter);
    given(sub, "--values", config.values, o.values);
    given(sub, "--repeats", config.repeats, o.repeats);
    given(sub, "--epochs", config.network.epochs, o.epochs);
    if (o.fixed_dataset) config.fixed_dataset = true;
    if (ctx.globals.has_seed()) config.master_seed = ctx.globals.seed;
    config.validate();

    const fs::path dir = o.output.empty() ? results_dir() : fs::path(o.output);
    const auto config_json = config_to_json(config);
    ManifestWriter manifest(dir, new_run("sweep", ctx.args, config_json, config.master_seed));
    try {
        const auto result = run_sweep(config, o.parallel, [&](const SweepRow& row, std::size_t done, std::size_t total) {
            ctx.out << "[" << done << "/" << total << "] " << to_string(config.parameter) << "=" << row.value
                    << " repeat " << row.repeat << ": "
                    << (row.lc_count ? std::to_string(*row.lc_count) + " LCs" : "failed: " + row.error)
                    << (row.lc_count && !row.accuracy_ok ? " (excluded, accuracy < 100%)" : "") << "\n";
        });
        auto outputs = write_sweep_results(dir, result, config_json, !o.no_timing);
        io::write_text(dir / "config.yaml", config_to_yaml(config));
        outputs.push_back(dir / "config.yaml");
        manifest.finish(outputs);
        ctx.out << "included " << result.rows_included() << ", excluded " << result.rows_excluded() << "\n";
    } catch (const std::exception& e) {
        manifest.fail(e.what());
        throw;
    }
    return kExitOk;
}

// ---- report ---------------------------------------------------------------

struct ReportOpts {
    std::string results;
    std::string style;
    std::string output;
    std::size_t bin_width = 1;
};

void add_report(CLI::App& app, ReportOpts& o) {
    app.add_option("--results", o.results, "Sweep results directory")->required();
    app.add_option("--style", o.style, "fig3|fig5|table1")->required()->check(CLI::IsMember({"fig3", "fig5", "table1"}));
    app.add_option("-o,--output", o.output, "Output directory (default: the results directory)");
    app.add_option("--bin-width", o.bin_width, "Histogram bin width for fig5")->check(CLI::PositiveNumber);
}

std::vector<double> numeric_values(const SweepResult& r) {
    std::vector<double> out;
    for (const auto& v : r.values) out.push_back(text::parse_double(v, "swept value"));
    return out;
}

int run_report(Context& ctx, const ReportOpts& o) {
    const fs::path in = o.results;
    const fs::path dir = o.output.empty() ? in : fs::path(o.output);
    const auto loaded = load_sweep_results(in);
    const auto& result = loaded.result;

    auto run = new_run("report", ctx.args, loaded.config, result.master_seed);
    run.inputs = {digest(in / kRowsFile), digest(in / kAggregatesFile)};
    ManifestWriter manifest(dir, std::move(run));
    std::vector<fs::path> outputs;
    try {
        if (o.style == "fig3") {
            auto series = series_from_sweep(result, std::string(to_string(result.parameter)));
            if (result.parameter == SweptParameter::hidden_size && loaded.config.contains("code")) {
                const double n = loaded.config["code"].value("num_codewords", 0.0);
                if (n > 0) series.reference_lines = {n, 2 * n};
            }
            outputs = {dir / "fig3_curve.csv", dir / "fig3.gp"};
            io::write_text(outputs[0], render_curve(series));
            io::write_text(outputs[1], curve_gnuplot(series, "fig3_curve.csv", std::string(to_string(result.parameter))));
        } else {
            if (result.parameter != SweptParameter::dropout_rate)
                throw UsageError("--style " + o.style + " needs a dropout_rate sweep");
            const auto rates = numeric_values(result);
            if (o.style == "table1") {
                std::vector<std::optional<LcStatistics>> stats;
                for (const auto& a : result.aggregates) stats.push_back(a.stats);
                outputs = {dir / "table1.txt"};
                io::write_text(outputs[0], render_table(dropout_table(rates, stats)));
            } else {
                std::vector<Histogram> hists;
                for (std::size_t i = 0; i < rates.size(); ++i) hists.push_back(histogram(result.counts(i), o.bin_width));
                outputs = {dir / "fig5_distribution.csv", dir / "fig5.gp"};
                io::write_text(outputs[0], render_distribution(distribution_rows(rates, hists)));
                io::write_text(outputs[1], distribution_gnuplot(rates, "fig5_distribution.csv"));
            }
        }
        manifest.finish(outputs);
    } catch (const std::exception& e) {
        manifest.fail(e.what());
        throw;
    }
    for (const auto& p : outputs) ctx.out << "wrote " << p.string() << "\n";
    return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generate binary codes, train small networks on them and count local codes", "localcodes"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", LOCALCODES_VERSION);

    Context ctx{{}, args, out};
    auto& g = ctx.globals;
    app.add_option("--preset", g.preset, "Base settings: desk|full")->check(CLI::IsMember({"desk", "full"}));
    app.add_option("--config", g.config_path, "YAML config file (overrides the preset, overridden by flags)");
    g.seed_opt = app.add_option("--seed", g.seed, "Seed for the subcommand's random draws");

    GenerateOpts gen;
    TrainOpts tr;
    AnalyzeOpts an;
    SweepOpts sw;
    ReportOpts rep;
    auto* generate = app.add_subcommand("generate", "Generate a dataset of prototype-block codewords");
    auto* train_cmd = app.add_subcommand("train", "Train a network and record hidden activations");
    auto* analyze = app.add_subcommand("analyze", "Count local codes in recorded activations");
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    auto* report = app.add_subcommand("report", "Render sweep results as plot data and tables");
    add_generate(*generate, gen);
    add_train(*train_cmd, tr);
    add_analyze(*analyze, an);
    add_sweep(*sweep, sw);
    add_report(*report, rep);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*generate) return run_generate(ctx, generate, gen);
        if (*train_cmd) return run_train(ctx, train_cmd, tr);
        if (*analyze) return run_analyze(ctx, analyze, an);
        if (*sweep) return run_sweep_cmd(ctx, sweep, sw);
        return run_report(ctx, rep);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitData;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const GenerationError& e) {
        err << "generation error: " << e.what() << "\n";
        return kExitData;
    } catch (const TrainingError& e) {
        err << "training error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const FitError& e) {
        err << "fit error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace localcodes::cli
