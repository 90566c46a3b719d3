#include "localcodes/config.hpp"

#include <sstream>

#include <yaml-cpp/yaml.h>

#include "localcodes/binary_io.hpp"
#include "localcodes/errors.hpp"
#include "localcodes/text.hpp"

namespace localcodes {

std::string_view to_string(Preset p) { return p == Preset::desk ? "desk" : "full"; }

Preset parse_preset(std::string_view name) {
    if (name == "desk") return Preset::desk;
    if (name == "full") return Preset::full;
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected desk|full)");
}

SweepConfig preset_config(Preset preset) {
    SweepConfig c;
    c.parameter = SweptParameter::hidden_size;
    c.repeats = 10;
    c.threshold = kDefaultThreshold;
    c.output_coding = OutputCoding::distributed;
    c.network.hidden_activation = Activation::sigmoid;
    c.network.dropout_rate = 0.0;
    c.network.optimizer = Optimizer::sgd;
    c.network.loss = LossKind::mse;
    c.network.learning_rate = 5.0;
    c.network.batch_size = 0;
    c.network.output_size = kDistributedOutputLength;
    if (preset == Preset::desk) {
        c.code = {100, 5, 100, 30, 0.0, 0};
        c.network.input_size = 100;
        c.network.hidden_size = 200;
        c.network.epochs = 5000;
        c.values = {"25", "50", "100", "200", "400"};
    } else {
        c.code = {500, 10, 500, 150, 0.0, 0};
        c.network.input_size = 500;
        c.network.hidden_size = 1000;
        c.network.epochs = 45000;
        c.values = {"100", "250", "500", "1000", "1500", "2000"};
    }
    return c;
}

namespace {

void check_keys(const YAML::Node& node, const std::string& section, std::initializer_list<std::string_view> allowed) {
    if (!node.IsMap()) throw ConfigError(section + ": expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) throw ConfigError("unknown config key '" + (section.empty() ? key : section + "." + key) + "'");
    }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("config key '" + key + "' has an invalid value");
    }
}

std::size_t size_value(const YAML::Node& node, const std::string& key) {
    return static_cast<std::size_t>(text::parse_u64(scalar<std::string>(node, key), key));
}

double real_value(const YAML::Node& node, const std::string& key) {
    return text::parse_double(scalar<std::string>(node, key), key);
}

template <typename Fn>
void if_key(const YAML::Node& section, const char* key, Fn&& fn) {
    if (const auto n = section[key]) fn(n);
}

}  // namespace

void apply_config_text(SweepConfig& config, std::string_view yaml_text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(source + ": " + e.what());
    }
    if (root.IsNull()) return;
    check_keys(root, "", {"format_version", "preset", "code", "output_coding", "network", "sweep", "analysis"});

    if (const auto v = root["format_version"]) {
        if (size_value(v, "format_version") != static_cast<std::size_t>(kConfigFormatVersion))
            throw ConfigError(source + ": unsupported format_version");
    }
    if (const auto p = root["preset"]) config = preset_config(parse_preset(scalar<std::string>(p, "preset")));

    if (const auto code = root["code"]) {
        check_keys(code, "code",
                   {"codeword_length", "num_classes", "num_codewords", "random_weight", "perturbation_rate", "seed"});
        auto& c = config.code;
        if_key(code, "codeword_length", [&](auto n) { c.codeword_length = size_value(n, "code.codeword_length"); });
        if_key(code, "num_classes", [&](auto n) { c.num_classes = size_value(n, "code.num_classes"); });
        if_key(code, "num_codewords", [&](auto n) { c.num_codewords = size_value(n, "code.num_codewords"); });
        if_key(code, "random_weight", [&](auto n) { c.random_weight = size_value(n, "code.random_weight"); });
        if_key(code, "perturbation_rate", [&](auto n) { c.perturbation_rate = real_value(n, "code.perturbation_rate"); });
        if_key(code, "seed", [&](auto n) { c.seed = text::parse_u64(scalar<std::string>(n, "code.seed"), "code.seed"); });
    }
    if (const auto oc = root["output_coding"]) config.output_coding = parse_output_coding(scalar<std::string>(oc, "output_coding"));

    if (const auto net = root["network"]) {
        check_keys(net, "network",
                   {"hidden_size", "activation", "dropout_rate", "epochs", "learning_rate", "batch_size", "optimizer",
                    "loss", "init_seed"});
        auto& n = config.network;
        if_key(net, "hidden_size", [&](auto v) { n.hidden_size = size_value(v, "network.hidden_size"); });
        if_key(net, "activation", [&](auto v) { n.hidden_activation = parse_activation(scalar<std::string>(v, "network.activation")); });
        if_key(net, "dropout_rate", [&](auto v) { n.dropout_rate = real_value(v, "network.dropout_rate"); });
        if_key(net, "epochs", [&](auto v) { n.epochs = size_value(v, "network.epochs"); });
        if_key(net, "learning_rate", [&](auto v) { n.learning_rate = real_value(v, "network.learning_rate"); });
        if_key(net, "batch_size", [&](auto v) { n.batch_size = size_value(v, "network.batch_size"); });
        if_key(net, "optimizer", [&](auto v) { n.optimizer = parse_optimizer(scalar<std::string>(v, "network.optimizer")); });
        if_key(net, "loss", [&](auto v) { n.loss = parse_loss(scalar<std::string>(v, "network.loss")); });
        if_key(net, "init_seed", [&](auto v) {
            n.init_seed = text::parse_u64(scalar<std::string>(v, "network.init_seed"), "network.init_seed");
        });
    }

    if (const auto sweep = root["sweep"]) {
        check_keys(sweep, "sweep", {"parameter", "values", "repeats", "master_seed", "fixed_dataset"});
        if_key(sweep, "parameter", [&](auto v) { config.parameter = parse_swept_parameter(scalar<std::string>(v, "sweep.parameter")); });
        if_key(sweep, "values", [&](auto v) {
            if (!v.IsSequence()) throw ConfigError("config key 'sweep.values' must be a list");
            config.values.clear();
            for (const auto& item : v) config.values.push_back(scalar<std::string>(item, "sweep.values"));
        });
        if_key(sweep, "repeats", [&](auto v) { config.repeats = size_value(v, "sweep.repeats"); });
        if_key(sweep, "master_seed", [&](auto v) {
            config.master_seed = text::parse_u64(scalar<std::string>(v, "sweep.master_seed"), "sweep.master_seed");
        });
        if_key(sweep, "fixed_dataset", [&](auto v) { config.fixed_dataset = scalar<bool>(v, "sweep.fixed_dataset"); });
    }

    if (const auto analysis = root["analysis"]) {
        check_keys(analysis, "analysis", {"threshold"});
        if_key(analysis, "threshold", [&](auto v) { config.threshold = real_value(v, "analysis.threshold"); });
    }
    config.network.input_size = config.code.codeword_length;
    config.network.output_size =
        config.output_coding == OutputCoding::distributed ? kDistributedOutputLength : config.code.num_classes;
}

void apply_config_file(SweepConfig& config, const std::filesystem::path& path) {
    std::string text;
    try {
        text = io::read_text(path);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    apply_config_text(config, text, path.string());
}

nlohmann::json config_to_json(const SweepConfig& c) {
    nlohmann::json j;
    j["format_version"] = kConfigFormatVersion;
    j["code"] = {{"codeword_length", c.code.codeword_length},
                 {"num_classes", c.code.num_classes},
                 {"num_codewords", c.code.num_codewords},
                 {"random_weight", c.code.random_weight},
                 {"perturbation_rate", c.code.perturbation_rate},
                 {"seed", c.code.seed}};
    j["output_coding"] = to_string(c.output_coding);
    j["network"] = {{"input_size", c.network.input_size},
                    {"hidden_size", c.network.hidden_size},
                    {"output_size", c.network.output_size},
                    {"activation", to_string(c.network.hidden_activation)},
                    {"dropout_rate", c.network.dropout_rate},
                    {"epochs", c.network.epochs},
                    {"learning_rate", c.network.learning_rate},
                    {"batch_size", c.network.batch_size},
                    {"optimizer", to_string(c.network.optimizer)},
                    {"loss", to_string(c.network.loss)},
                    {"init_seed", c.network.init_seed}};
    j["sweep"] = {{"parameter", to_string(c.parameter)},
                  {"values", c.values},
                  {"repeats", c.repeats},
                  {"master_seed", c.master_seed},
                  {"fixed_dataset", c.fixed_dataset}};
    j["analysis"] = {{"threshold", c.threshold}};
    return j;
}

std::string config_to_yaml(const SweepConfig& c) {
    std::ostringstream out;
    out << "format_version: " << kConfigFormatVersion << "\n";
    out << "code:\n"
        << "  codeword_length: " << c.code.codeword_length << "\n"
        << "  num_classes: " << c.code.num_classes << "\n"
        << "  num_codewords: " << c.code.num_codewords << "\n"
        << "  random_weight: " << c.code.random_weight << "\n"
        << "  perturbation_rate: " << text::format_double(c.code.perturbation_rate) << "\n"
        << "  seed: " << c.code.seed << "\n";
    out << "output_coding: " << to_string(c.output_coding) << "\n";
    out << "network:\n"
        << "  hidden_size: " << c.network.hidden_size << "\n"
        << "  activation: " << to_string(c.network.hidden_activation) << "\n"
        << "  dropout_rate: " << text::format_double(c.network.dropout_rate) << "\n"
        << "  epochs: " << c.network.epochs << "\n"
        << "  learning_rate: " << text::format_double(c.network.learning_rate) << "\n"
        << "  batch_size: " << c.network.batch_size << "\n"
        << "  optimizer: " << to_string(c.network.optimizer) << "\n"
        << "  loss: " << to_string(c.network.loss) << "\n"
        << "  init_seed: " << c.network.init_seed << "\n";
    out << "sweep:\n"
        << "  parameter: " << to_string(c.parameter) << "\n"
        << "  values: [";
    for (std::size_t i = 0; i < c.values.size(); ++i) out << (i ? ", " : "") << '"' << c.values[i] << '"';
    out << "]\n"
        << "  repeats: " << c.repeats << "\n"
        << "  master_seed: " << c.master_seed << "\n"
        << "  fixed_dataset: " << (c.fixed_dataset ? "true" : "false") << "\n";
    out << "analysis:\n"
        << "  threshold: " << text::format_double(c.threshold) << "\n";
    return out.str();
}

}  // namespace localcodes
