#include <gtest/gtest.h>

#include <filesystem>

#include "localcodes/binary_io.hpp"
#include "localcodes/config.hpp"
#include "localcodes/errors.hpp"
#include "localcodes/manifest.hpp"
#include "localcodes/text.hpp"

using namespace localcodes;

TEST(Presets, DeskAndFull) {
    const auto desk = preset_config(Preset::desk);
    EXPECT_EQ(desk.code.codeword_length, 100u);
    EXPECT_EQ(desk.code.num_classes, 5u);
    EXPECT_EQ(desk.code.num_codewords, 100u);
    EXPECT_EQ(desk.code.random_weight, 30u);
    EXPECT_EQ(desk.code.block_length(), 20u);
    EXPECT_EQ(desk.network.epochs, 5000u);
    EXPECT_EQ(desk.values, (std::vector<std::string>{"25", "50", "100", "200", "400"}));
    EXPECT_NO_THROW(desk.validate());

    const auto full = preset_config(Preset::full);
    EXPECT_EQ(full.code.codeword_length, 500u);
    EXPECT_EQ(full.code.num_classes, 10u);
    EXPECT_EQ(full.code.random_weight, 150u);
    EXPECT_EQ(full.network.epochs, 45000u);
    EXPECT_NO_THROW(full.validate());

    EXPECT_EQ(parse_preset("full"), Preset::full);
    EXPECT_THROW(parse_preset("laptop"), ConfigError);
}

TEST(ConfigText, OverlaysNestedKeys) {
    auto c = preset_config(Preset::desk);
    apply_config_text(c, R"(
format_version: 1
code:
  random_weight: 8
  perturbation_rate: 0.2
output_coding: one_hot
network:
  hidden_size: 64
  activation: relu
  optimizer: adam
sweep:
  parameter: dropout_rate
  values: [0, 0.5, 0.9]
  repeats: 4
  master_seed: 18446744073709551615
  fixed_dataset: true
analysis:
  threshold: 0.1
)");
    EXPECT_EQ(c.code.random_weight, 8u);
    EXPECT_EQ(c.code.perturbation_rate, 0.2);
    EXPECT_EQ(c.code.codeword_length, 100u);
    EXPECT_EQ(c.output_coding, OutputCoding::one_hot);
    EXPECT_EQ(c.network.output_size, 5u);
    EXPECT_EQ(c.network.hidden_size, 64u);
    EXPECT_EQ(c.network.hidden_activation, Activation::relu);
    EXPECT_EQ(c.network.optimizer, Optimizer::adam);
    EXPECT_EQ(c.parameter, SweptParameter::dropout_rate);
    EXPECT_EQ(c.values, (std::vector<std::string>{"0", "0.5", "0.9"}));
    EXPECT_EQ(c.repeats, 4u);
    EXPECT_EQ(c.master_seed, 18446744073709551615ULL);
    EXPECT_TRUE(c.fixed_dataset);
    EXPECT_EQ(c.threshold, 0.1);
}

TEST(ConfigText, PresetKeyAppliesFirst) {
    auto c = preset_config(Preset::desk);
    apply_config_text(c, "preset: full\nnetwork:\n  epochs: 10\n");
    EXPECT_EQ(c.code.codeword_length, 500u);
    EXPECT_EQ(c.network.epochs, 10u);
}

TEST(ConfigText, ErrorsNameTheKey) {
    auto c = preset_config(Preset::desk);
    try {
        apply_config_text(c, "network:\n  hiden_size: 3\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("network.hiden_size"), std::string::npos);
    }
    try {
        apply_config_text(c, "code:\n  random_weight: lots\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("code.random_weight"), std::string::npos);
    }
    EXPECT_THROW(apply_config_text(c, "format_version: 2\n"), ConfigError);
    EXPECT_THROW(apply_config_text(c, "network: [1, 2]\n"), ConfigError);
    EXPECT_THROW(apply_config_text(c, "sweep:\n  values: 3\n"), ConfigError);
    EXPECT_THROW(apply_config_text(c, "network: {activation: tanh}\n"), ConfigError);
    EXPECT_THROW(apply_config_text(c, "code: {: \n"), ConfigError);
    EXPECT_THROW(apply_config_file(c, "/nonexistent/config.yaml"), ConfigError);
}

TEST(ConfigText, EmptyDocumentChangesNothing) {
    auto c = preset_config(Preset::desk);
    apply_config_text(c, "");
    EXPECT_EQ(config_to_json(c), config_to_json(preset_config(Preset::desk)));
}

TEST(ConfigText, YamlEchoRoundTrips) {
    auto c = preset_config(Preset::desk);
    c.code.perturbation_rate = 0.3;
    c.network.dropout_rate = 0.9;
    c.network.learning_rate = 0.125;
    c.values = {"a,b", "0.1"};
    c.master_seed = 123456789012345ULL;
    auto back = preset_config(Preset::full);
    apply_config_text(back, config_to_yaml(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
}

TEST(Text, StrictNumberParsing) {
    EXPECT_EQ(text::parse_double("0.25", "x"), 0.25);
    EXPECT_THROW(text::parse_double("0.25abc", "x"), ConfigError);
    EXPECT_THROW(text::parse_double("", "x"), ConfigError);
    EXPECT_THROW(text::parse_double("nan", "x"), ConfigError);
    EXPECT_EQ(text::parse_u64("42", "x"), 42u);
    EXPECT_THROW(text::parse_u64("-1", "x"), ConfigError);
    EXPECT_EQ(text::format_double(0.1), "0.1");
    EXPECT_THROW(text::format_double(1.0 / 0.0), DataError);
}

TEST(Text, CsvQuoting) {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "line\nbreak", ""};
    const auto line = text::csv_line(fields);
    EXPECT_EQ(line, "plain,\"with,comma\",\"with \"\"quote\"\"\",\"line\nbreak\",\n");
    const auto parsed = text::parse_csv(line);
    ASSERT_EQ(parsed.size(), 1u);
    EXPECT_EQ(parsed[0], fields);
    EXPECT_EQ(text::parse_csv("a,b\r\nc,d"), (std::vector<std::vector<std::string>>{{"a", "b"}, {"c", "d"}}));
    EXPECT_THROW(text::parse_csv("\"open"), DataError);
}

TEST(Manifest, Sha256KnownVectors) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Manifest, WriterAppendsAndFinishes) {
    const auto dir = std::filesystem::temp_directory_path() / "localcodes_test_manifest";
    std::filesystem::remove_all(dir);
    RunRecord run;
    run.subcommand = "generate";
    run.tool_version = "0";
    run.seed = 9;
    run.config = {{"k", 1}};
    {
        ManifestWriter w(dir, run);
        const auto before = read_manifest(dir);
        ASSERT_EQ(before.runs.size(), 1u);
        EXPECT_EQ(before.runs[0].status, "running");
        io::write_text(dir / "out.txt", "abc");
        w.finish({dir / "out.txt"});
    }
    {
        ManifestWriter w(dir, run);
        w.fail("boom");
    }
    const auto m = read_manifest(dir);
    ASSERT_EQ(m.runs.size(), 2u);
    EXPECT_EQ(m.runs[0].status, "ok");
    ASSERT_EQ(m.runs[0].outputs.size(), 1u);
    EXPECT_EQ(m.runs[0].outputs[0].sha256, sha256_hex("abc"));
    EXPECT_EQ(m.runs[0].seed, 9u);
    EXPECT_EQ(m.runs[0].config, run.config);
    EXPECT_FALSE(m.runs[0].finished_at.empty());
    EXPECT_EQ(m.runs[1].status, "failed");
    EXPECT_EQ(m.runs[1].error, "boom");
    std::size_t manifests = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        manifests += e.path().filename() == kManifestFile ? 1 : 0;
    EXPECT_EQ(manifests, 1u);
    std::filesystem::remove_all(dir);
}
