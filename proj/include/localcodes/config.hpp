#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "localcodes/experiment.hpp"

namespace localcodes {

enum class Preset { desk, full };

std::string_view to_string(Preset p);
Preset parse_preset(std::string_view name);

/// Settings shared by every subcommand. A SweepConfig carries the code,
/// output coding, network and analysis threshold, so the single-run
/// subcommands use the same structure and ignore the sweep fields.
///
/// desk:  L_x=100, n_P=5, n_x=100, w_R=30, n_HLN=200, 5,000 epochs,
///        hidden-size sweep over {25, 50, 100, 200, 400}
/// full:  L_x=500, n_P=10, n_x=500, w_R=150, n_HLN=1000, 45,000 epochs,
///        hidden-size sweep over {100, 250, 500, 1000, 1500, 2000}
/// Both train sigmoid hidden units with full-batch SGD (lr 5) on MSE.
SweepConfig preset_config(Preset preset);

inline constexpr int kConfigFormatVersion = 1;

/// Overlays a YAML config document onto `config`. Keys:
///
///   format_version: 1
///   preset: desk|full            # applied first when present
///   code: {codeword_length, num_classes, num_codewords, random_weight,
///          perturbation_rate, seed}
///   output_coding: distributed|one_hot
///   network: {hidden_size, activation, dropout_rate, epochs, learning_rate,
///             batch_size, optimizer, loss, init_seed}
///   sweep: {parameter, values, repeats, master_seed, fixed_dataset}
///   analysis: {threshold}
///
/// Unknown keys and malformed values raise ConfigError naming the key.
void apply_config_text(SweepConfig& config, std::string_view yaml_text, const std::string& source = "config");
void apply_config_file(SweepConfig& config, const std::filesystem::path& path);

/// Resolved configuration echo (used in run manifests and sweep output).
nlohmann::json config_to_json(const SweepConfig& config);
/// YAML text that apply_config_text parses back to the same config.
std::string config_to_yaml(const SweepConfig& config);

}  // namespace localcodes
