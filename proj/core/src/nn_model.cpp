#include "xbarsim/nn_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace xbarsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double clamp_prob(double p)
{
    return std::clamp(p, 1e-12, 1.0 - 1e-12);
}

} // namespace

std::string activation_name(const ActivationKind &kind)
{
    return std::visit(overloaded{
            [](const Threshold &) { return std::string("threshold"); },
            [](const Sigmoid &) { return std::string("sigmoid"); },
            [](const Linear &) { return std::string("linear"); },
            [](const Lut8 &) { return std::string("lut8"); },
    }, kind);
}

int lut_index_real(double v, double input_step)
{
    const double idx = std::floor(v / input_step);
    return static_cast<int>(std::clamp(idx, -128.0, 127.0));
}

int lut_index_fixed(std::int64_t accumulator, int shift)
{
    const std::int64_t shifted = accumulator >> shift; // arithmetic in C++20
    return static_cast<int>(std::clamp<std::int64_t>(shifted, -128, 127));
}

Lut8 make_sigmoid_lut(double input_step)
{
    Lut8 lut;
    lut.input_step = input_step;
    lut.output_scale = 1.0 / 127.0;
    for (int i = -128; i < 128; ++i) {
        const double y = sigmoid_value(i * input_step);
        lut.table[static_cast<std::size_t>(i + 128)] =
                static_cast<std::int8_t>(std::lround(127.0 * y));
    }
    return lut;
}

double apply_activation(const ActivationKind &kind, double v)
{
    return std::visit(overloaded{
            [v](const Threshold &) { return threshold_value(v); },
            [v](const Sigmoid &) { return sigmoid_value(v); },
            [v](const Linear &) { return v; },
            [v](const Lut8 &lut) {
                const int idx = lut_index_real(v, lut.input_step);
                return lut.table[static_cast<std::size_t>(idx + 128)] * lut.output_scale;
            },
    }, kind);
}

void LayerSpec::validate() const
{
    if (n_inputs == 0 || n_neurons == 0) {
        throw DimensionError("layer must have at least one input and one neuron");
    }
    if (weights.rows != weight_rows() || weights.cols != n_neurons) {
        std::ostringstream ss;
        ss << "weight matrix is " << weights.rows << "x" << weights.cols
           << ", expected " << weight_rows() << "x" << n_neurons;
        throw DimensionError(ss.str());
    }
    if (!mask.empty() && mask.size() != weights.data.size()) {
        throw DimensionError("connectivity mask does not match the weight matrix");
    }
}

std::size_t NetworkSpec::synapse_count() const
{
    std::size_t n = 0;
    for (const auto &layer : layers) {
        if (layer.mask.empty()) {
            n += layer.n_inputs * layer.n_neurons;
        } else {
            for (std::size_t r = 0; r < layer.n_inputs; ++r) {
                for (std::size_t c = 0; c < layer.n_neurons; ++c) {
                    n += layer.connected(r, c) ? 1 : 0;
                }
            }
        }
    }
    return n;
}

std::string NetworkSpec::topology() const
{
    std::ostringstream ss;
    if (layers.empty()) {
        return "";
    }
    ss << layers.front().n_inputs;
    for (const auto &layer : layers) {
        ss << "->" << layer.n_neurons;
    }
    return ss.str();
}

void NetworkSpec::validate() const
{
    if (layers.empty()) {
        throw DimensionError("network has no layers");
    }
    for (std::size_t k = 0; k < layers.size(); ++k) {
        layers[k].validate();
        if (k + 1 < layers.size() && layers[k].n_neurons != layers[k + 1].n_inputs) {
            std::ostringstream ss;
            ss << "layer " << k << " has " << layers[k].n_neurons
               << " neurons but layer " << k + 1 << " expects "
               << layers[k + 1].n_inputs << " inputs";
            throw DimensionError(ss.str());
        }
    }
}

NetworkSpec make_network(const std::vector<std::size_t> &sizes,
        const ActivationKind &hidden, const ActivationKind &output, bool bias)
{
    if (sizes.size() < 2) {
        throw DimensionError("a network needs at least an input and an output size");
    }
    NetworkSpec net;
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
        LayerSpec layer;
        layer.n_inputs = sizes[k];
        layer.n_neurons = sizes[k + 1];
        layer.bias_enabled = bias;
        layer.activation = (k + 2 == sizes.size()) ? output : hidden;
        layer.weights = Matrix(layer.weight_rows(), layer.n_neurons);
        net.layers.push_back(std::move(layer));
    }
    net.name = net.topology();
    net.validate();
    return net;
}

void initialize_weights(NetworkSpec &net, std::uint64_t seed)
{
    Rng rng(seed);
    for (auto &layer : net.layers) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.n_inputs + layer.n_neurons));
        for (std::size_t r = 0; r < layer.weights.rows; ++r) {
            for (std::size_t c = 0; c < layer.weights.cols; ++c) {
                const double w = rng.uniform(-limit, limit);
                layer.weights(r, c) = layer.connected(r, c) ? w : 0.0;
            }
        }
    }
}

double dot_product(std::span<const double> weights, std::span<const double> inputs)
{
    if (weights.size() != inputs.size()) {
        throw DimensionError("dot_product: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i] * inputs[i];
    }
    return acc;
}

std::int64_t dot_product(std::span<const std::int32_t> weights,
        std::span<const std::int64_t> inputs)
{
    if (weights.size() != inputs.size()) {
        throw DimensionError("dot_product: length mismatch");
    }
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += static_cast<std::int64_t>(weights[i]) * inputs[i];
    }
    return acc;
}

std::vector<double> layer_pre_activation(const LayerSpec &layer,
        std::span<const double> input)
{
    if (input.size() != layer.n_inputs) {
        throw DimensionError("layer input has the wrong length");
    }
    // Accumulates input-major; for each neuron the summation order is the
    // same as dot_product over (inputs..., bias).
    std::vector<double> acc(layer.n_neurons, 0.0);
    for (std::size_t i = 0; i < layer.n_inputs; ++i) {
        const double x = input[i];
        const auto w = layer.weights.row(i);
        for (std::size_t j = 0; j < layer.n_neurons; ++j) {
            acc[j] += w[j] * x;
        }
    }
    if (layer.bias_enabled) {
        const auto w = layer.weights.row(layer.n_inputs);
        for (std::size_t j = 0; j < layer.n_neurons; ++j) {
            acc[j] += w[j] * 1.0;
        }
    }
    return acc;
}

std::vector<double> forward(const NetworkSpec &net, std::span<const double> input)
{
    if (input.size() != net.n_inputs()) {
        throw DimensionError("network input has the wrong length");
    }
    std::vector<double> x(input.begin(), input.end());
    for (const auto &layer : net.layers) {
        auto z = layer_pre_activation(layer, x);
        for (auto &v : z) {
            v = apply_activation(layer.activation, v);
        }
        x = std::move(z);
    }
    return x;
}

namespace {

std::vector<double> scale_pixels(std::span<const std::uint8_t> pixels)
{
    std::vector<double> x(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        x[i] = pixels[i] / 255.0;
    }
    return x;
}

} // namespace

std::vector<double> forward_pixels(const NetworkSpec &net,
        std::span<const std::uint8_t> pixels)
{
    return forward(net, scale_pixels(pixels));
}

std::vector<double> output_pre_activation(const NetworkSpec &net,
        std::span<const std::uint8_t> pixels)
{
    if (pixels.size() != net.n_inputs()) {
        throw DimensionError("network input has the wrong length");
    }
    std::vector<double> x = scale_pixels(pixels);
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        auto z = layer_pre_activation(net.layers[k], x);
        if (k + 1 == net.layers.size()) {
            return z;
        }
        for (auto &v : z) {
            v = apply_activation(net.layers[k].activation, v);
        }
        x = std::move(z);
    }
    return x;
}

std::size_t argmax(std::span<const double> v)
{
    if (v.empty()) {
        throw DimensionError("argmax of an empty vector");
    }
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::size_t classify_scores(std::span<const double> scores)
{
    if (scores.size() == 1) {
        return scores[0] > 0.0 ? 1 : 0;
    }
    return argmax(scores);
}

TrainingDivergence::TrainingDivergence(std::size_t e)
    : std::runtime_error("training diverged: non-finite loss in epoch " + std::to_string(e)),
      epoch(e)
{
}

namespace {

struct TrainActivation {
    enum class Kind { sigmoid, surrogate, linear } kind;
    double k = 4.0;
};

TrainActivation training_activation(const ActivationKind &kind, double steepness)
{
    return std::visit(overloaded{
            [&](const Threshold &) { return TrainActivation{TrainActivation::Kind::surrogate, steepness}; },
            [&](const Sigmoid &) { return TrainActivation{TrainActivation::Kind::sigmoid, 1.0}; },
            [&](const Linear &) { return TrainActivation{TrainActivation::Kind::linear, 1.0}; },
            [&](const Lut8 &) -> TrainActivation {
                throw std::invalid_argument("train_sgd: lut8 layers are not differentiable");
            },
    }, kind);
}

double train_value(const TrainActivation &a, double z)
{
    switch (a.kind) {
    case TrainActivation::Kind::sigmoid:
        return sigmoid_value(z);
    case TrainActivation::Kind::surrogate:
        return 2.0 * sigmoid_value(a.k * z) - 1.0;
    case TrainActivation::Kind::linear:
        return z;
    }
    return z;
}

// Derivative expressed in terms of the activation output y.
double train_slope(const TrainActivation &a, double y)
{
    switch (a.kind) {
    case TrainActivation::Kind::sigmoid:
        return y * (1.0 - y);
    case TrainActivation::Kind::surrogate: {
        const double s = 0.5 * (y + 1.0);
        return 2.0 * a.k * s * (1.0 - s);
    }
    case TrainActivation::Kind::linear:
        return 1.0;
    }
    return 1.0;
}

} // namespace

TrainResult train_sgd(const NetworkSpec &start, const LabeledDataset &data,
        const TrainOptions &opt)
{
    if (data.empty()) {
        throw DatasetError("train_sgd: empty dataset");
    }
    start.validate();
    if (data.input_size != start.n_inputs()) {
        throw DimensionError("train_sgd: dataset input size does not match the network");
    }
    TrainResult result{start, {}};
    NetworkSpec &net = result.net;
    const std::size_t n_layers = net.layers.size();
    std::vector<TrainActivation> acts;
    for (const auto &layer : net.layers) {
        acts.push_back(training_activation(layer.activation, opt.threshold_steepness));
    }

    Rng rng(opt.seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    // a[0] is the scaled input; a[k + 1] the output of layer k.
    std::vector<std::vector<double>> a(n_layers + 1);
    std::vector<std::vector<double>> delta(n_layers);
    const std::size_t n_out = net.n_outputs();

    for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
        rng.shuffle(order);
        double loss = 0.0;
        for (const std::size_t s : order) {
            const auto px = data.sample(s);
            a[0].resize(px.size());
            for (std::size_t i = 0; i < px.size(); ++i) {
                a[0][i] = px[i] / 255.0;
            }
            for (std::size_t k = 0; k < n_layers; ++k) {
                a[k + 1] = layer_pre_activation(net.layers[k], a[k]);
                for (auto &v : a[k + 1]) {
                    v = train_value(acts[k], v);
                }
            }

            const std::size_t label = data.labels[s];
            auto &dL = delta[n_layers - 1];
            dL.assign(n_out, 0.0);
            const auto &y = a[n_layers];
            const auto &out_act = acts[n_layers - 1];
            for (std::size_t j = 0; j < n_out; ++j) {
                const double t = (n_out == 1) ? (label == 1 ? 1.0 : 0.0) : (j == label ? 1.0 : 0.0);
                switch (out_act.kind) {
                case TrainActivation::Kind::sigmoid: {
                    const double p = clamp_prob(y[j]);
                    loss -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
                    dL[j] = y[j] - t;
                    break;
                }
                case TrainActivation::Kind::surrogate: {
                    // Cross-entropy on the underlying sigmoid(k z).
                    const double p = clamp_prob(0.5 * (y[j] + 1.0));
                    loss -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
                    dL[j] = out_act.k * (0.5 * (y[j] + 1.0) - t);
                    break;
                }
                case TrainActivation::Kind::linear:
                    loss += 0.5 * (y[j] - t) * (y[j] - t);
                    dL[j] = y[j] - t;
                    break;
                }
            }

            for (std::size_t k = n_layers - 1; k > 0; --k) {
                const auto &layer = net.layers[k];
                auto &d = delta[k - 1];
                d.assign(layer.n_inputs, 0.0);
                for (std::size_t i = 0; i < layer.n_inputs; ++i) {
                    const auto w = layer.weights.row(i);
                    double acc = 0.0;
                    for (std::size_t j = 0; j < layer.n_neurons; ++j) {
                        acc += w[j] * delta[k][j];
                    }
                    d[i] = acc * train_slope(acts[k - 1], a[k][i]);
                }
            }

            for (std::size_t k = 0; k < n_layers; ++k) {
                auto &layer = net.layers[k];
                const auto &d = delta[k];
                const bool masked = !layer.mask.empty();
                for (std::size_t i = 0; i < layer.weight_rows(); ++i) {
                    const double x = (i < layer.n_inputs) ? a[k][i] : 1.0;
                    if (x == 0.0) {
                        continue;
                    }
                    auto w = layer.weights.row(i);
                    const double step = opt.learning_rate * x;
                    if (masked) {
                        const std::uint8_t *m = layer.mask.data() + i * layer.n_neurons;
                        for (std::size_t j = 0; j < layer.n_neurons; ++j) {
                            if (m[j]) {
                                w[j] -= step * d[j];
                            }
                        }
                    } else {
                        for (std::size_t j = 0; j < layer.n_neurons; ++j) {
                            w[j] -= step * d[j];
                        }
                    }
                }
            }
        }
        loss /= static_cast<double>(data.size());
        if (!std::isfinite(loss)) {
            throw TrainingDivergence(epoch);
        }
        result.epoch_loss.push_back(loss);
    }
    return result;
}

namespace {

void check_eval_shapes(std::size_t n_inputs, std::size_t n_outputs, const LabeledDataset &data)
{
    if (data.empty()) {
        throw DatasetError("evaluate_accuracy: empty dataset");
    }
    if (data.input_size != n_inputs) {
        throw DimensionError("evaluate_accuracy: dataset input size does not match the network");
    }
    const bool binary = n_outputs == 1 && data.n_classes <= 2;
    if (!binary && n_outputs != data.n_classes) {
        throw DimensionError("evaluate_accuracy: output layer size differs from the class count");
    }
}

} // namespace

double evaluate_accuracy(const NetworkSpec &net, const LabeledDataset &data)
{
    check_eval_shapes(net.n_inputs(), net.n_outputs(), data);
    std::size_t correct = 0;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto scores = output_pre_activation(net, data.sample(s));
        correct += classify_scores(scores) == data.labels[s] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

double activation_output_scale(const ActivationKind &kind, double accumulator_scale)
{
    return std::visit(overloaded{
            [](const Threshold &) { return 1.0; },
            [](const Sigmoid &) { return 1.0 / 255.0; },
            [&](const Linear &) { return accumulator_scale; },
            [](const Lut8 &lut) { return lut.output_scale; },
    }, kind);
}

QuantizedNetwork quantize(const NetworkSpec &net, int bits)
{
    if (bits < 2 || bits > 16) {
        throw std::invalid_argument("quantize: bits must be in [2, 16]");
    }
    net.validate();
    QuantizedNetwork q;
    q.name = net.name;
    q.input_bits = 8;
    q.output_bits = 8;
    q.input_scale = 1.0 / 255.0;
    double input_scale = q.input_scale;
    const std::int32_t qmax = (1 << (bits - 1)) - 1;
    for (const auto &layer : net.layers) {
        QuantizedLayer ql;
        ql.n_inputs = layer.n_inputs;
        ql.n_neurons = layer.n_neurons;
        ql.activation = layer.activation;
        ql.bias_enabled = layer.bias_enabled;
        ql.bits = bits;
        ql.mask = layer.mask;
        double max_abs = 0.0;
        for (const double w : layer.weights.data) {
            max_abs = std::max(max_abs, std::abs(w));
        }
        ql.weight_scale = (max_abs > 0.0) ? max_abs / qmax : 1.0;
        ql.codes.resize(layer.weights.data.size());
        for (std::size_t i = 0; i < ql.codes.size(); ++i) {
            const double c = std::round(layer.weights.data[i] / ql.weight_scale);
            ql.codes[i] = static_cast<std::int32_t>(std::clamp<double>(c, -qmax, qmax));
        }
        const double acc_scale = ql.weight_scale * input_scale;
        if (const auto *lut = std::get_if<Lut8>(&layer.activation)) {
            const double ratio = lut->input_step / acc_scale;
            ql.reduce_shift = ratio > 1.0 ? static_cast<int>(std::lround(std::log2(ratio))) : 0;
        }
        input_scale = activation_output_scale(layer.activation, acc_scale);
        q.layers.push_back(std::move(ql));
    }
    return q;
}

Matrix dequantize(const QuantizedLayer &layer)
{
    Matrix m(layer.weight_rows(), layer.n_neurons);
    for (std::size_t i = 0; i < layer.codes.size(); ++i) {
        m.data[i] = layer.codes[i] * layer.weight_scale;
    }
    return m;
}

NetworkSpec dequantize(const QuantizedNetwork &net)
{
    NetworkSpec out;
    out.name = net.name;
    for (const auto &ql : net.layers) {
        LayerSpec layer;
        layer.n_inputs = ql.n_inputs;
        layer.n_neurons = ql.n_neurons;
        layer.activation = ql.activation;
        layer.bias_enabled = ql.bias_enabled;
        layer.weights = dequantize(ql);
        layer.mask = ql.mask;
        out.layers.push_back(std::move(layer));
    }
    return out;
}

QuantizedLayerResult quantized_layer_forward(const QuantizedLayer &layer,
        const QuantizedActivity &input)
{
    if (input.codes.size() != layer.n_inputs) {
        throw DimensionError("quantized layer input has the wrong length");
    }
    QuantizedLayerResult r;
    r.accumulator_scale = layer.weight_scale * input.scale;
    r.accumulators.assign(layer.n_neurons, 0);
    const std::int64_t bias_code = std::llround(1.0 / input.scale);
    std::vector<std::int32_t> column(layer.weight_rows());
    std::vector<std::int64_t> x(input.codes.begin(), input.codes.end());
    if (layer.bias_enabled) {
        x.push_back(bias_code);
    }
    for (std::size_t j = 0; j < layer.n_neurons; ++j) {
        for (std::size_t i = 0; i < column.size(); ++i) {
            column[i] = layer.code(i, j);
        }
        r.accumulators[j] = dot_product(column, x);
    }

    r.output.scale = activation_output_scale(layer.activation, r.accumulator_scale);
    r.output.codes.resize(layer.n_neurons);
    for (std::size_t j = 0; j < layer.n_neurons; ++j) {
        const std::int64_t acc = r.accumulators[j];
        r.output.codes[j] = std::visit(overloaded{
                [&](const Threshold &) -> std::int64_t { return acc > 0 ? 1 : -1; },
                [&](const Sigmoid &) -> std::int64_t {
                    return std::llround(255.0 * sigmoid_value(acc * r.accumulator_scale));
                },
                [&](const Linear &) -> std::int64_t { return acc; },
                [&](const Lut8 &lut) -> std::int64_t {
                    const int idx = lut_index_fixed(acc, layer.reduce_shift);
                    return lut.table[static_cast<std::size_t>(idx + 128)];
                },
        }, layer.activation);
    }
    return r;
}

std::vector<QuantizedLayerResult> forward_quantized(const QuantizedNetwork &net,
        std::span<const std::uint8_t> pixels)
{
    if (net.layers.empty() || pixels.size() != net.layers.front().n_inputs) {
        throw DimensionError("quantized network input has the wrong length");
    }
    QuantizedActivity x;
    x.codes.assign(pixels.begin(), pixels.end());
    x.scale = net.input_scale;
    std::vector<QuantizedLayerResult> trace;
    trace.reserve(net.layers.size());
    for (const auto &layer : net.layers) {
        trace.push_back(quantized_layer_forward(layer, x));
        x = trace.back().output;
    }
    return trace;
}

double evaluate_accuracy(const QuantizedNetwork &net, const LabeledDataset &data)
{
    if (net.layers.empty()) {
        throw DimensionError("evaluate_accuracy: empty network");
    }
    check_eval_shapes(net.layers.front().n_inputs, net.layers.back().n_neurons, data);
    std::size_t correct = 0;
    std::vector<double> scores;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto trace = forward_quantized(net, data.sample(s));
        const auto &acc = trace.back().accumulators;
        scores.assign(acc.begin(), acc.end());
        correct += classify_scores(scores) == data.labels[s] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

} // namespace xbarsim
