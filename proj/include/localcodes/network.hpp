#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "localcodes/codegen.hpp"

namespace localcodes {

enum class Activation { sigmoid, relu };
enum class Optimizer { adam, sgd };
enum class LossKind { cross_entropy, mse };

std::string_view to_string(Activation a);
std::string_view to_string(Optimizer o);
std::string_view to_string(LossKind l);
Activation parse_activation(std::string_view name);
Optimizer parse_optimizer(std::string_view name);
LossKind parse_loss(std::string_view name);

/// Architecture and training hyperparameters of a single-hidden-layer net.
struct NetworkConfig {
    std::size_t input_size = 500;
    std::size_t hidden_size = 1000;
    std::size_t output_size = 50;
    Activation hidden_activation = Activation::sigmoid;
    double dropout_rate = 0.0;
    std::size_t epochs = 45000;
    double learning_rate = 5.0;
    std::size_t batch_size = 0;  // 0 = full batch
    Optimizer optimizer = Optimizer::sgd;
    LossKind loss = LossKind::mse;
    std::uint64_t init_seed = 0;

    void validate() const;

    friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct TrainedNetwork {
    NetworkConfig config;
    Eigen::MatrixXd w1;  // hidden x input
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;  // output x hidden
    Eigen::VectorXd b2;
    double final_loss = 0.0;
    bool reached_full_accuracy = false;
    std::size_t epochs_run = 0;
    /// Training loss per epoch (with dropout noise); not persisted.
    std::vector<double> loss_history;

    /// Glorot-uniform weights seeded from config.init_seed, zero biases.
    static TrainedNetwork initialize(const NetworkConfig& config);
    /// All weights and biases zero.
    static TrainedNetwork zeros(const NetworkConfig& config);

    std::size_t parameter_count() const;
    bool all_finite() const;
};

/// Inference-mode hidden activations over a dataset, rows in dataset order.
struct ActivationRecord {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t num_classes = 0;
    Activation activation = Activation::sigmoid;
    std::vector<double> values;  // row-major
    std::vector<std::size_t> class_ids;

    double at(std::size_t row, std::size_t unit) const { return values[row * cols + unit]; }
    std::vector<double> column(std::size_t unit) const;

    /// Shape, class-id range, and activation range (sigmoid in [0, 1], relu >= 0).
    void validate() const;

    friend bool operator==(const ActivationRecord&, const ActivationRecord&) = default;
};

struct ForwardResult {
    Eigen::VectorXd hidden;
    Eigen::VectorXd output;
};

ForwardResult forward(const TrainedNetwork& net, const BitVector& input);
ForwardResult forward(const TrainedNetwork& net, const Eigen::VectorXd& input);

/// Dataset codewords as an items x input_size matrix of 0/1.
Eigen::MatrixXd input_matrix(const Dataset& dataset);
/// Per-item targets as an items x output_size matrix of 0/1.
Eigen::MatrixXd target_matrix(const Dataset& dataset);

struct Gradients {
    double loss = 0.0;
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;
    Eigen::VectorXd b2;
};

/// Mean loss over all (item, output) entries and its gradients. When
/// `dropout_mask` is non-empty (items x hidden, already scaled by 1/keep) it
/// multiplies the hidden activations.
Gradients loss_and_gradients(const TrainedNetwork& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                             const Eigen::MatrixXd& dropout_mask = {});

/// Inference-mode mean loss.
double evaluate_loss(const TrainedNetwork& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

/// Inverted-dropout mask: each entry is 0 with probability `rate`, else 1/(1-rate).
Eigen::MatrixXd dropout_mask(std::size_t rows, std::size_t cols, double rate, Rng& rng);

struct TrainingOutcome {
    TrainedNetwork network;
    ActivationRecord activations;
};

/// Runs config.epochs epochs of gradient descent (full batch unless
/// batch_size > 0), then records inference-mode hidden activations.
/// Throws TrainingError if the loss becomes non-finite.
TrainingOutcome train(const Dataset& dataset, const NetworkConfig& config);

ActivationRecord record_activations(const TrainedNetwork& net, const Dataset& dataset);

/// Fraction of items whose every target-1 output exceeds 0.9 and every
/// target-0 output is below 0.1.
double accuracy(const TrainedNetwork& net, const Dataset& dataset);
double accuracy(const TrainedNetwork& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

inline constexpr double kOnThreshold = 0.9;
inline constexpr double kOffThreshold = 0.1;

/// Max relative error between analytic gradients and central differences
/// with the given step. Relative error is |a - n| / max(|a|, |n|, 1e-6).
double gradient_check(const TrainedNetwork& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                      double step = 1e-5);
/// Same, on a freshly initialized network for `config` over `sample`.
double gradient_check(const NetworkConfig& config, const Dataset& sample, double step = 1e-5);

// Checkpoint file, version 1: "LCNN" u32 version, config fields, then
// w1, b1, w2, b2 as row-major f64, then final_loss, reached flag, epochs_run.
inline constexpr std::uint32_t kCheckpointFormatVersion = 1;
// Activation file, version 1: "LCAC" u32 version, u64 rows/cols/classes,
// u8 activation, rows x u32 class id, rows x cols row-major f64.
inline constexpr std::uint32_t kActivationFormatVersion = 1;

void save_network(const TrainedNetwork& net, const std::filesystem::path& path);
TrainedNetwork load_network(const std::filesystem::path& path);
void save_activations(const ActivationRecord& record, const std::filesystem::path& path);
ActivationRecord load_activations(const std::filesystem::path& path);

}  // namespace localcodes
