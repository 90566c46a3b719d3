#include "localcodes/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "localcodes/binary_io.hpp"
#include "localcodes/errors.hpp"

namespace localcodes {

std::string_view to_string(Activation a) { return a == Activation::sigmoid ? "sigmoid" : "relu"; }
std::string_view to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }
std::string_view to_string(LossKind l) { return l == LossKind::cross_entropy ? "cross_entropy" : "mse"; }

Activation parse_activation(std::string_view name) {
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "relu") return Activation::relu;
    throw ConfigError("unknown activation '" + std::string(name) + "' (expected sigmoid|relu)");
}

Optimizer parse_optimizer(std::string_view name) {
    if (name == "adam") return Optimizer::adam;
    if (name == "sgd") return Optimizer::sgd;
    throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected adam|sgd)");
}

LossKind parse_loss(std::string_view name) {
    if (name == "cross_entropy" || name == "bce") return LossKind::cross_entropy;
    if (name == "mse") return LossKind::mse;
    throw ConfigError("unknown loss '" + std::string(name) + "' (expected cross_entropy|mse)");
}

void NetworkConfig::validate() const {
    if (input_size == 0 || hidden_size == 0 || output_size == 0) throw ConfigError("layer sizes must be at least 1");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw ConfigError("dropout_rate must lie in [0, 1)");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be positive");
}

namespace {

// Numerically stable binary cross-entropy from the logit.
double bce_from_logit(double z, double t) { return std::max(z, 0.0) - z * t + std::log1p(std::exp(-std::abs(z))); }

// Buffers for one forward/backward pass, reused across epochs so the
// training loop does not allocate.
struct Workspace {
    Eigen::MatrixXd z1, h, hd, z2, y, dz2, dh, dz1;
};

void run_forward(const TrainedNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& mask, Workspace& ws) {
    ws.z1.resize(x.rows(), net.w1.rows());
    ws.z1.noalias() = x * net.w1.transpose();
    ws.z1.rowwise() += net.b1.transpose();
    if (net.config.hidden_activation == Activation::sigmoid) ws.h = ws.z1.array().logistic();
    else ws.h = ws.z1.cwiseMax(0.0);
    const Eigen::MatrixXd& hidden = mask.size() == 0 ? ws.h : (ws.hd = ws.h.cwiseProduct(mask));
    ws.z2.resize(x.rows(), net.w2.rows());
    ws.z2.noalias() = hidden * net.w2.transpose();
    ws.z2.rowwise() += net.b2.transpose();
    ws.y = ws.z2.array().logistic();
}

const Eigen::MatrixXd& effective_hidden(const Workspace& ws, const Eigen::MatrixXd& mask) {
    return mask.size() == 0 ? ws.h : ws.hd;
}

double mean_loss(const Workspace& ws, const Eigen::MatrixXd& t, LossKind kind) {
    double sum = 0.0;
    if (kind == LossKind::cross_entropy) {
        for (Eigen::Index j = 0; j < t.cols(); ++j)
            for (Eigen::Index i = 0; i < t.rows(); ++i) sum += bce_from_logit(ws.z2(i, j), t(i, j));
    } else {
        sum = (ws.y - t).squaredNorm();
    }
    return sum / static_cast<double>(t.size());
}

// Forward and backward pass; fills g (which keeps its storage across calls).
void backprop(const TrainedNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& t, const Eigen::MatrixXd& mask,
              Workspace& ws, Gradients& g) {
    run_forward(net, x, mask, ws);
    g.loss = mean_loss(ws, t, net.config.loss);

    const double scale = 1.0 / static_cast<double>(t.size());
    if (net.config.loss == LossKind::cross_entropy) {
        ws.dz2 = (ws.y - t) * scale;
    } else {
        ws.dz2 = (2.0 * scale) * ((ws.y - t).array() * ws.y.array() * (1.0 - ws.y.array())).matrix();
    }
    const auto& hidden = effective_hidden(ws, mask);
    g.w2.resize(net.w2.rows(), net.w2.cols());
    g.w2.noalias() = ws.dz2.transpose() * hidden;
    g.b2 = ws.dz2.colwise().sum().transpose();

    ws.dh.resize(x.rows(), net.w1.rows());
    ws.dh.noalias() = ws.dz2 * net.w2;
    if (mask.size() != 0) ws.dh.array() *= mask.array();
    if (net.config.hidden_activation == Activation::sigmoid)
        ws.dz1 = ws.dh.array() * ws.h.array() * (1.0 - ws.h.array());
    else
        ws.dz1 = ws.dh.array() * (ws.z1.array() > 0.0).cast<double>();
    g.w1.resize(net.w1.rows(), net.w1.cols());
    g.w1.noalias() = ws.dz1.transpose() * x;
    g.b1 = ws.dz1.colwise().sum().transpose();
}

void check_shapes(const TrainedNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& t) {
    if (static_cast<std::size_t>(x.cols()) != net.config.input_size)
        throw UsageError("input width " + std::to_string(x.cols()) + " does not match input_size " +
                         std::to_string(net.config.input_size));
    if (static_cast<std::size_t>(t.cols()) != net.config.output_size)
        throw UsageError("target width " + std::to_string(t.cols()) + " does not match output_size " +
                         std::to_string(net.config.output_size));
    if (x.rows() != t.rows()) throw UsageError("input and target row counts differ");
}

Eigen::MatrixXd glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Eigen::MatrixXd m(rows, cols);
    // Row-major fill order so the draw sequence matches the file layout.
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform_real(-limit, limit);
    return m;
}

struct AdamState {
    Eigen::MatrixXd m_w1, v_w1, m_w2, v_w2;
    Eigen::VectorXd m_b1, v_b1, m_b2, v_b2;
    std::size_t step = 0;

    explicit AdamState(const TrainedNetwork& net)
        : m_w1(Eigen::MatrixXd::Zero(net.w1.rows(), net.w1.cols())), v_w1(m_w1),
          m_w2(Eigen::MatrixXd::Zero(net.w2.rows(), net.w2.cols())), v_w2(m_w2),
          m_b1(Eigen::VectorXd::Zero(net.b1.size())), v_b1(m_b1),
          m_b2(Eigen::VectorXd::Zero(net.b2.size())), v_b2(m_b2) {}
};

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

template <typename Param, typename Moment>
void adam_update(Param& p, const Param& g, Moment& m, Moment& v, double lr_t) {
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    p.array() -= lr_t * m.array() / (v.array().sqrt() + kAdamEps);
}

void apply_update(TrainedNetwork& net, const Gradients& g, AdamState* adam) {
    const double lr = net.config.learning_rate;
    if (!adam) {
        net.w1 -= lr * g.w1;
        net.b1 -= lr * g.b1;
        net.w2 -= lr * g.w2;
        net.b2 -= lr * g.b2;
        return;
    }
    ++adam->step;
    const auto t = static_cast<double>(adam->step);
    // Bias correction folded into the step size.
    const double lr_t = lr * std::sqrt(1.0 - std::pow(kBeta2, t)) / (1.0 - std::pow(kBeta1, t));
    adam_update(net.w1, g.w1, adam->m_w1, adam->v_w1, lr_t);
    adam_update(net.b1, g.b1, adam->m_b1, adam->v_b1, lr_t);
    adam_update(net.w2, g.w2, adam->m_w2, adam->v_w2, lr_t);
    adam_update(net.b2, g.b2, adam->m_b2, adam->v_b2, lr_t);
}

}  // namespace

TrainedNetwork TrainedNetwork::initialize(const NetworkConfig& config) {
    config.validate();
    Rng rng(config.init_seed);
    TrainedNetwork net;
    net.config = config;
    const auto in = static_cast<Eigen::Index>(config.input_size);
    const auto hid = static_cast<Eigen::Index>(config.hidden_size);
    const auto out = static_cast<Eigen::Index>(config.output_size);
    net.w1 = glorot(hid, in, rng);
    net.b1 = Eigen::VectorXd::Zero(hid);
    net.w2 = glorot(out, hid, rng);
    net.b2 = Eigen::VectorXd::Zero(out);
    return net;
}

TrainedNetwork TrainedNetwork::zeros(const NetworkConfig& config) {
    config.validate();
    TrainedNetwork net;
    net.config = config;
    const auto in = static_cast<Eigen::Index>(config.input_size);
    const auto hid = static_cast<Eigen::Index>(config.hidden_size);
    const auto out = static_cast<Eigen::Index>(config.output_size);
    net.w1 = Eigen::MatrixXd::Zero(hid, in);
    net.b1 = Eigen::VectorXd::Zero(hid);
    net.w2 = Eigen::MatrixXd::Zero(out, hid);
    net.b2 = Eigen::VectorXd::Zero(out);
    return net;
}

std::size_t TrainedNetwork::parameter_count() const {
    return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

bool TrainedNetwork::all_finite() const {
    return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite();
}

std::vector<double> ActivationRecord::column(std::size_t unit) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, unit);
    return out;
}

void ActivationRecord::validate() const {
    if (values.size() != rows * cols) throw DataError("activation record: value count does not match rows x cols");
    if (class_ids.size() != rows) throw DataError("activation record: class id count does not match rows");
    for (auto c : class_ids)
        if (c >= num_classes) throw DataError("activation record: class id out of range");
    for (double v : values) {
        if (!std::isfinite(v)) throw DataError("activation record: non-finite activation");
        if (v < 0.0 || (activation == Activation::sigmoid && v > 1.0))
            throw DataError("activation record: activation outside the range of " + std::string(to_string(activation)));
    }
}

ForwardResult forward(const TrainedNetwork& net, const Eigen::VectorXd& input) {
    if (static_cast<std::size_t>(input.size()) != net.config.input_size)
        throw UsageError("forward: input length " + std::to_string(input.size()) + " does not match input_size " +
                         std::to_string(net.config.input_size));
    ForwardResult r;
    const Eigen::VectorXd z1 = net.w1 * input + net.b1;
    if (net.config.hidden_activation == Activation::sigmoid) r.hidden = z1.array().logistic();
    else r.hidden = z1.cwiseMax(0.0);
    const Eigen::VectorXd z2 = net.w2 * r.hidden + net.b2;
    r.output = z2.array().logistic();
    return r;
}

ForwardResult forward(const TrainedNetwork& net, const BitVector& input) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(input.size()));
    for (std::size_t i = 0; i < input.size(); ++i) x(static_cast<Eigen::Index>(i)) = input.test(i) ? 1.0 : 0.0;
    return forward(net, x);
}

Eigen::MatrixXd input_matrix(const Dataset& dataset) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dataset.codewords.size()),
                                              static_cast<Eigen::Index>(dataset.input_size()));
    for (std::size_t i = 0; i < dataset.codewords.size(); ++i)
        for (auto p : dataset.codewords[i].bits.ones()) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = 1.0;
    return x;
}

Eigen::MatrixXd target_matrix(const Dataset& dataset) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dataset.codewords.size()),
                                              static_cast<Eigen::Index>(dataset.output_size()));
    for (std::size_t i = 0; i < dataset.codewords.size(); ++i)
        for (auto p : dataset.target_for(i).ones()) t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = 1.0;
    return t;
}

Gradients loss_and_gradients(const TrainedNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& t,
                             const Eigen::MatrixXd& mask) {
    check_shapes(net, x, t);
    Workspace ws;
    Gradients g;
    backprop(net, x, t, mask, ws, g);
    return g;
}

double evaluate_loss(const TrainedNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& t) {
    check_shapes(net, x, t);
    Workspace ws;
    run_forward(net, x, {}, ws);
    return mean_loss(ws, t, net.config.loss);
}

namespace {

void fill_dropout_mask(Eigen::MatrixXd& m, std::size_t rows, std::size_t cols, double rate, Rng& rng) {
    const double keep_scale = 1.0 / (1.0 - rate);
    m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.bernoulli(rate) ? 0.0 : keep_scale;
}

}  // namespace

Eigen::MatrixXd dropout_mask(std::size_t rows, std::size_t cols, double rate, Rng& rng) {
    Eigen::MatrixXd m;
    fill_dropout_mask(m, rows, cols, rate, rng);
    return m;
}

ActivationRecord record_activations(const TrainedNetwork& net, const Dataset& dataset) {
    const Eigen::MatrixXd x = input_matrix(dataset);
    if (static_cast<std::size_t>(x.cols()) != net.config.input_size)
        throw UsageError("dataset codeword length does not match network input_size");
    Workspace f;
    run_forward(net, x, {}, f);
    ActivationRecord rec;
    rec.rows = static_cast<std::size_t>(f.h.rows());
    rec.cols = static_cast<std::size_t>(f.h.cols());
    rec.num_classes = dataset.spec.num_classes;
    rec.activation = net.config.hidden_activation;
    rec.values.resize(rec.rows * rec.cols);
    for (std::size_t r = 0; r < rec.rows; ++r)
        for (std::size_t c = 0; c < rec.cols; ++c)
            rec.values[r * rec.cols + c] = f.h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    rec.class_ids.reserve(rec.rows);
    for (const auto& cw : dataset.codewords) rec.class_ids.push_back(cw.class_id);
    return rec;
}

double accuracy(const TrainedNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& t) {
    check_shapes(net, x, t);
    if (x.rows() == 0) return 0.0;
    Workspace f;
    run_forward(net, x, {}, f);
    Eigen::Index correct = 0;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        bool ok = true;
        for (Eigen::Index j = 0; j < t.cols() && ok; ++j)
            ok = t(i, j) > 0.5 ? f.y(i, j) > kOnThreshold : f.y(i, j) < kOffThreshold;
        correct += ok ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(t.rows());
}

double accuracy(const TrainedNetwork& net, const Dataset& dataset) {
    return accuracy(net, input_matrix(dataset), target_matrix(dataset));
}

TrainingOutcome train(const Dataset& dataset, const NetworkConfig& config) {
    config.validate();
    if (config.input_size != dataset.input_size())
        throw UsageError("network input_size " + std::to_string(config.input_size) + " does not match codeword length " +
                         std::to_string(dataset.input_size()));
    if (config.output_size != dataset.output_size())
        throw UsageError("network output_size " + std::to_string(config.output_size) + " does not match target length " +
                         std::to_string(dataset.output_size()));

    auto net = TrainedNetwork::initialize(config);
    const Eigen::MatrixXd x = input_matrix(dataset);
    const Eigen::MatrixXd t = target_matrix(dataset);
    const auto n = static_cast<std::size_t>(x.rows());
    const bool full_batch = config.batch_size == 0 || config.batch_size >= n;
    const bool use_dropout = config.dropout_rate > 0.0;

    Rng rng(mix_seed(config.init_seed, 0x747261696eULL));
    std::optional<AdamState> adam;
    if (config.optimizer == Optimizer::adam) adam.emplace(net);
    Workspace ws;
    Gradients g;
    Eigen::MatrixXd mask;
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    net.loss_history.reserve(config.epochs);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        double epoch_loss = 0.0;
        if (full_batch) {
            if (use_dropout) fill_dropout_mask(mask, n, config.hidden_size, config.dropout_rate, rng);
            backprop(net, x, t, mask, ws, g);
            epoch_loss = g.loss;
            if (!std::isfinite(g.loss)) throw TrainingError("training loss became non-finite", epoch);
            apply_update(net, g, adam ? &*adam : nullptr);
        } else {
            for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
            for (std::size_t start = 0; start < n; start += config.batch_size) {
                const auto len = std::min(config.batch_size, n - start);
                const std::vector<Eigen::Index> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                     order.begin() + static_cast<std::ptrdiff_t>(start + len));
                const Eigen::MatrixXd xb = x(rows, Eigen::all);
                const Eigen::MatrixXd tb = t(rows, Eigen::all);
                if (use_dropout) fill_dropout_mask(mask, len, config.hidden_size, config.dropout_rate, rng);
                backprop(net, xb, tb, mask, ws, g);
                if (!std::isfinite(g.loss)) throw TrainingError("training loss became non-finite", epoch);
                epoch_loss += g.loss * static_cast<double>(len) / static_cast<double>(n);
                apply_update(net, g, adam ? &*adam : nullptr);
            }
        }
        net.loss_history.push_back(epoch_loss);
        net.epochs_run = epoch + 1;
    }

    if (!net.all_finite()) throw TrainingError("network parameters became non-finite", net.epochs_run);
    net.final_loss = evaluate_loss(net, x, t);
    net.reached_full_accuracy = accuracy(net, x, t) == 1.0;
    auto record = record_activations(net, dataset);
    return {std::move(net), std::move(record)};
}

double gradient_check(const TrainedNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& t, double step) {
    const auto analytic = loss_and_gradients(net, x, t);
    TrainedNetwork probe = net;
    double worst = 0.0;

    auto check = [&](auto& param, const auto& grad) {
        for (Eigen::Index i = 0; i < param.size(); ++i) {
            const double saved = param.data()[i];
            param.data()[i] = saved + step;
            const double up = evaluate_loss(probe, x, t);
            param.data()[i] = saved - step;
            const double down = evaluate_loss(probe, x, t);
            param.data()[i] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double a = grad.data()[i];
            const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
            worst = std::max(worst, std::abs(a - numeric) / denom);
        }
    };
    check(probe.w1, analytic.w1);
    check(probe.b1, analytic.b1);
    check(probe.w2, analytic.w2);
    check(probe.b2, analytic.b2);
    return worst;
}

double gradient_check(const NetworkConfig& config, const Dataset& sample, double step) {
    const auto net = TrainedNetwork::initialize(config);
    return gradient_check(net, input_matrix(sample), target_matrix(sample), step);
}

namespace {

void write_matrix(io::ByteWriter& w, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) w.f64(m(r, c));
}

Eigen::MatrixXd read_matrix(io::ByteReader& r, std::size_t rows, std::size_t cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.f64();
    return m;
}

}  // namespace

void save_network(const TrainedNetwork& net, const std::filesystem::path& path) {
    io::ByteWriter w;
    w.magic("LCNN");
    w.u32(kCheckpointFormatVersion);
    const auto& c = net.config;
    w.u64(c.input_size);
    w.u64(c.hidden_size);
    w.u64(c.output_size);
    w.u8(c.hidden_activation == Activation::sigmoid ? 0 : 1);
    w.f64(c.dropout_rate);
    w.u64(c.epochs);
    w.f64(c.learning_rate);
    w.u64(c.batch_size);
    w.u8(c.optimizer == Optimizer::adam ? 0 : 1);
    w.u8(c.loss == LossKind::cross_entropy ? 0 : 1);
    w.u64(c.init_seed);
    write_matrix(w, net.w1);
    write_matrix(w, net.b1);
    write_matrix(w, net.w2);
    write_matrix(w, net.b2);
    w.f64(net.final_loss);
    w.u8(net.reached_full_accuracy ? 1 : 0);
    w.u64(net.epochs_run);
    io::write_file(path, w.bytes());
}

TrainedNetwork load_network(const std::filesystem::path& path) {
    const auto bytes = io::read_file(path);
    io::ByteReader r(bytes, path.string());
    r.expect_magic("LCNN");
    if (const auto v = r.u32(); v != kCheckpointFormatVersion)
        throw DataError(path.string() + ": unsupported checkpoint version " + std::to_string(v));
    TrainedNetwork net;
    auto& c = net.config;
    c.input_size = r.u64();
    c.hidden_size = r.u64();
    c.output_size = r.u64();
    c.hidden_activation = r.u8() == 0 ? Activation::sigmoid : Activation::relu;
    c.dropout_rate = r.f64();
    c.epochs = r.u64();
    c.learning_rate = r.f64();
    c.batch_size = r.u64();
    c.optimizer = r.u8() == 0 ? Optimizer::adam : Optimizer::sgd;
    c.loss = r.u8() == 0 ? LossKind::cross_entropy : LossKind::mse;
    c.init_seed = r.u64();
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    net.w1 = read_matrix(r, c.hidden_size, c.input_size);
    net.b1 = read_matrix(r, c.hidden_size, 1);
    net.w2 = read_matrix(r, c.output_size, c.hidden_size);
    net.b2 = read_matrix(r, c.output_size, 1);
    net.final_loss = r.f64();
    net.reached_full_accuracy = r.u8() != 0;
    net.epochs_run = r.u64();
    r.expect_end();
    if (!net.all_finite()) throw DataError(path.string() + ": non-finite weights");
    return net;
}

void save_activations(const ActivationRecord& rec, const std::filesystem::path& path) {
    io::ByteWriter w;
    w.magic("LCAC");
    w.u32(kActivationFormatVersion);
    w.u64(rec.rows);
    w.u64(rec.cols);
    w.u64(rec.num_classes);
    w.u8(rec.activation == Activation::sigmoid ? 0 : 1);
    for (auto c : rec.class_ids) w.u32(static_cast<std::uint32_t>(c));
    for (double v : rec.values) w.f64(v);
    io::write_file(path, w.bytes());
}

ActivationRecord load_activations(const std::filesystem::path& path) {
    const auto bytes = io::read_file(path);
    io::ByteReader r(bytes, path.string());
    r.expect_magic("LCAC");
    if (const auto v = r.u32(); v != kActivationFormatVersion)
        throw DataError(path.string() + ": unsupported activation file version " + std::to_string(v));
    ActivationRecord rec;
    rec.rows = r.u64();
    rec.cols = r.u64();
    rec.num_classes = r.u64();
    rec.activation = r.u8() == 0 ? Activation::sigmoid : Activation::relu;
    if (rec.rows > bytes.size() || rec.cols > bytes.size()) throw DataError(path.string() + ": implausible shape");
    rec.class_ids.resize(rec.rows);
    for (auto& c : rec.class_ids) c = r.u32();
    rec.values.resize(rec.rows * rec.cols);
    for (auto& v : rec.values) v = r.f64();
    r.expect_end();
    rec.validate();
    return rec;
}

}  // namespace localcodes
