#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "xbarsim/common.hpp"
#include "xbarsim/dataset.hpp"

namespace xbarsim {

// Output rails of the inverter-pair readout.
inline constexpr double rail_high = 1.0;
inline constexpr double rail_low = -1.0;

struct Threshold {
    bool operator==(const Threshold &) const = default;
};
struct Sigmoid {
    bool operator==(const Sigmoid &) const = default;
};
// Identity; used for partial neurons produced by layer splitting.
struct Linear {
    bool operator==(const Linear &) const = default;
};
// 256-entry activation table indexed by a signed 8-bit value: entry
// table[i + 128] holds f(i * input_step) as a signed code worth
// output_scale each.
struct Lut8 {
    std::array<std::int8_t, 256> table{};
    double input_step = 1.0 / 16.0;
    double output_scale = 1.0 / 127.0;
    bool operator==(const Lut8 &) const = default;
};

using ActivationKind = std::variant<Threshold, Sigmoid, Linear, Lut8>;

std::string activation_name(const ActivationKind &kind);

// +1 for v > 0, -1 otherwise. Every engine shares this tie rule.
inline double threshold_value(double v) { return v > 0.0 ? rail_high : rail_low; }
inline double sigmoid_value(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Saturating signed 8-bit LUT index for a real pre-activation.
int lut_index_real(double v, double input_step);
// Arithmetic right shift with symmetric saturation to [-128, 127].
int lut_index_fixed(std::int64_t accumulator, int shift);

Lut8 make_sigmoid_lut(double input_step = 1.0 / 16.0);

double apply_activation(const ActivationKind &kind, double v);

struct LayerSpec {
    std::size_t n_inputs = 0;
    std::size_t n_neurons = 0;
    ActivationKind activation = Sigmoid{};
    bool bias_enabled = true;
    // (n_inputs + bias) x n_neurons. Row i holds the weights of input i;
    // the bias weight is the last row.
    Matrix weights;
    // Optional connectivity mask with the same shape as weights (1 =
    // connected). Empty means fully connected.
    std::vector<std::uint8_t> mask;

    std::size_t weight_rows() const { return n_inputs + (bias_enabled ? 1 : 0); }
    bool connected(std::size_t row, std::size_t col) const
    {
        return mask.empty() || mask[row * n_neurons + col] != 0;
    }
    void validate() const;
    bool operator==(const LayerSpec &) const = default;
};

struct NetworkSpec {
    std::string name;
    std::vector<LayerSpec> layers;

    std::size_t n_inputs() const { return layers.empty() ? 0 : layers.front().n_inputs; }
    std::size_t n_outputs() const { return layers.empty() ? 0 : layers.back().n_neurons; }
    std::size_t synapse_count() const; // excludes bias weights
    std::string topology() const;      // e.g. "784->200->100->10"
    void validate() const;
    bool operator==(const NetworkSpec &) const = default;
};

// Zero-weight network with the given layer sizes, e.g. {784, 200, 10}.
NetworkSpec make_network(const std::vector<std::size_t> &sizes,
        const ActivationKind &hidden, const ActivationKind &output,
        bool bias = true);

// Uniform in +-sqrt(6 / (fan_in + fan_out)); masked weights stay zero.
void initialize_weights(NetworkSpec &net, std::uint64_t seed);

double dot_product(std::span<const double> weights, std::span<const double> inputs);
std::int64_t dot_product(std::span<const std::int32_t> weights,
        std::span<const std::int64_t> inputs);

// Pre-activations of one layer for a real input vector (bias appended).
std::vector<double> layer_pre_activation(const LayerSpec &layer,
        std::span<const double> input);

std::vector<double> forward(const NetworkSpec &net, std::span<const double> input);
// Pixels are scaled by 1/255 before the first layer.
std::vector<double> forward_pixels(const NetworkSpec &net,
        std::span<const std::uint8_t> pixels);
// Last-layer pre-activations; classification uses their argmax.
std::vector<double> output_pre_activation(const NetworkSpec &net,
        std::span<const std::uint8_t> pixels);

std::size_t argmax(std::span<const double> v);
// Class decision for a score vector: argmax, or sign for a single output.
std::size_t classify_scores(std::span<const double> scores);

struct TrainOptions {
    std::size_t epochs = 10;
    double learning_rate = 0.05;
    std::uint64_t seed = 1;
    // Steepness k of the 2*sigmoid(k*v)-1 surrogate used for threshold layers.
    double threshold_steepness = 1.0;
};

struct TrainResult {
    NetworkSpec net;
    std::vector<double> epoch_loss;
};

class TrainingDivergence : public std::runtime_error {
public:
    TrainingDivergence(std::size_t epoch);
    std::size_t epoch;
};

// Per-sample SGD starting from the weights already in `net`.
TrainResult train_sgd(const NetworkSpec &net, const LabeledDataset &data,
        const TrainOptions &opt);

double evaluate_accuracy(const NetworkSpec &net, const LabeledDataset &data);

struct QuantizedLayer {
    std::size_t n_inputs = 0;
    std::size_t n_neurons = 0;
    ActivationKind activation = Sigmoid{};
    bool bias_enabled = true;
    int bits = 8;
    double weight_scale = 1.0;
    std::vector<std::int32_t> codes; // weight_rows() x n_neurons
    int reduce_shift = 0;           // Lut8 layers only
    std::vector<std::uint8_t> mask;

    std::size_t weight_rows() const { return n_inputs + (bias_enabled ? 1 : 0); }
    std::int32_t code(std::size_t row, std::size_t col) const
    {
        return codes[row * n_neurons + col];
    }
    std::int32_t max_code() const { return (1 << (bits - 1)) - 1; }
    bool operator==(const QuantizedLayer &) const = default;
};

struct QuantizedNetwork {
    std::string name;
    std::vector<QuantizedLayer> layers;
    int input_bits = 8;
    int output_bits = 8;
    double input_scale = 1.0 / 255.0;
    bool operator==(const QuantizedNetwork &) const = default;
};

// Per-layer symmetric linear quantization: scale = max|w| / (2^(bits-1) - 1).
QuantizedNetwork quantize(const NetworkSpec &net, int bits);
Matrix dequantize(const QuantizedLayer &layer);
NetworkSpec dequantize(const QuantizedNetwork &net);

// Output scale of an activation when fed from accumulators of scale
// `accumulator_scale` (linear layers keep the accumulator scale).
double activation_output_scale(const ActivationKind &kind, double accumulator_scale);

// Integer codes of a layer's inputs together with their real-valued scale.
struct QuantizedActivity {
    std::vector<std::int64_t> codes;
    double scale = 1.0;
};

struct QuantizedLayerResult {
    std::vector<std::int64_t> accumulators;
    double accumulator_scale = 1.0;
    QuantizedActivity output;
};

QuantizedLayerResult quantized_layer_forward(const QuantizedLayer &layer,
        const QuantizedActivity &input);
std::vector<QuantizedLayerResult> forward_quantized(const QuantizedNetwork &net,
        std::span<const std::uint8_t> pixels);
double evaluate_accuracy(const QuantizedNetwork &net, const LabeledDataset &data);

} // namespace xbarsim
