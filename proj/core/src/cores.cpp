#include "xbarsim/cores.hpp"

#include <algorithm>
#include <cmath>

namespace xbarsim {

std::string core_type_name(CoreType t)
{
    switch (t) {
    case CoreType::risc:
        return "risc";
    case CoreType::digital:
        return "digital";
    case CoreType::itim:
        return "itim";
    }
    return "?";
}

CoreType parse_core_type(const std::string &name)
{
    if (name == "risc") {
        return CoreType::risc;
    }
    if (name == "digital") {
        return CoreType::digital;
    }
    if (name == "itim") {
        return CoreType::itim;
    }
    throw ConfigError("unknown architecture '" + name + "' (risc, digital, itim)");
}

void DigitalCoreConfig::validate() const
{
    if (max_inputs == 0 || max_neurons == 0 || !(clock_hz > 0.0) || weight_bits < 2
            || weight_bits > 16 || io_bits < 1 || accumulator_bits < 8 || accumulator_bits > 62) {
        throw ConfigError("invalid digital core configuration");
    }
}

QuantizedLayerResult digital_core_forward(const DigitalCoreConfig &cfg,
        const QuantizedLayer &layer, const QuantizedActivity &input)
{
    cfg.validate();
    if (layer.n_inputs > cfg.max_inputs || layer.n_neurons > cfg.max_neurons) {
        throw DimensionError("layer exceeds the digital core capacity");
    }
    if (layer.bits > cfg.weight_bits) {
        throw DimensionError("layer weights wider than the core synapse width");
    }
    if (input.codes.size() != layer.n_inputs) {
        throw DimensionError("digital core input has the wrong length");
    }
    const std::int64_t io_limit = (std::int64_t{1} << cfg.io_bits) - 1;
    const std::int64_t acc_limit = std::int64_t{1} << (cfg.accumulator_bits - 1);

    QuantizedLayerResult r;
    r.accumulator_scale = layer.weight_scale * input.scale;
    std::vector<std::int64_t> acc(layer.n_neurons, 0);
    if (layer.bias_enabled) {
        const std::int64_t bias = std::llround(1.0 / input.scale);
        for (std::size_t j = 0; j < layer.n_neurons; ++j) {
            acc[j] = std::int64_t{layer.code(layer.n_inputs, j)} * bias;
        }
    }
    for (std::size_t i = 0; i < layer.n_inputs; ++i) {
        const std::int64_t x = input.codes[i];
        if (x > io_limit || x < -io_limit) {
            throw DimensionError("digital core input exceeds the io width");
        }
        for (std::size_t j = 0; j < layer.n_neurons; ++j) {
            acc[j] += std::int64_t{layer.code(i, j)} * x;
            if (acc[j] >= acc_limit || acc[j] < -acc_limit) {
                throw DimensionError("digital core accumulator overflow");
            }
        }
    }
    r.accumulators = acc;
    r.output.scale = activation_output_scale(layer.activation, r.accumulator_scale);
    r.output.codes.resize(layer.n_neurons);
    for (std::size_t j = 0; j < layer.n_neurons; ++j) {
        const std::int64_t a = acc[j];
        if (std::holds_alternative<Threshold>(layer.activation)) {
            r.output.codes[j] = a > 0 ? 1 : -1;
        } else if (std::holds_alternative<Sigmoid>(layer.activation)) {
            r.output.codes[j] = std::llround(255.0 * sigmoid_value(a * r.accumulator_scale));
        } else if (std::holds_alternative<Linear>(layer.activation)) {
            r.output.codes[j] = a;
        } else {
            const auto &lut = std::get<Lut8>(layer.activation);
            // Reduce to the LUT index: arithmetic shift, then saturate.
            std::int64_t idx = a >> layer.reduce_shift;
            idx = std::clamp<std::int64_t>(idx, -128, 127);
            r.output.codes[j] = lut.table[static_cast<std::size_t>(idx + 128)];
        }
    }
    return r;
}

double digital_core_latency(const DigitalCoreConfig &cfg, std::size_t inputs_used)
{
    return static_cast<double>(inputs_used) / cfg.clock_hz;
}

void MemristorCoreConfig::validate() const
{
    if (max_inputs == 0 || max_neurons == 0 || crossbar_cycles < 0 || !(clock_hz > 0.0)
            || output_bits_per_neuron < 1 || link_bits < 1 || control_cycles < 0) {
        throw ConfigError("invalid memristor core configuration");
    }
}

int output_transfer_cycles(const MemristorCoreConfig &cfg, std::size_t outputs_used)
{
    const std::size_t bits = outputs_used * static_cast<std::size_t>(cfg.output_bits_per_neuron);
    return static_cast<int>((bits + static_cast<std::size_t>(cfg.link_bits) - 1)
            / static_cast<std::size_t>(cfg.link_bits));
}

double memristor_core_latency(const MemristorCoreConfig &cfg, std::size_t outputs_used)
{
    const int cycles = cfg.crossbar_cycles + output_transfer_cycles(cfg, outputs_used)
            + cfg.control_cycles;
    return cycles / cfg.clock_hz;
}

int calibrate_control_cycles(const MemristorCoreConfig &cfg, double reference_time,
        std::size_t reference_outputs)
{
    const double total = reference_time * cfg.clock_hz;
    const int k = static_cast<int>(std::lround(total)) - cfg.crossbar_cycles
            - output_transfer_cycles(cfg, reference_outputs);
    if (k < 0) {
        throw ConfigError("reference time is shorter than crossbar plus transfer time");
    }
    return k;
}

std::vector<double> memristor_core_forward(const MemristorCoreConfig &cfg,
        const CrossbarSolver &crossbar, std::span<const std::uint8_t> inputs)
{
    if (!cfg.has_dac) {
        throw ConfigError("8-bit inputs need a core with DACs");
    }
    return crossbar_layer_forward(crossbar, inputs);
}

std::vector<double> memristor_core_forward(const MemristorCoreConfig &,
        const CrossbarSolver &crossbar, std::span<const double> levels)
{
    for (const double v : levels) {
        if (v != 1.0 && v != -1.0) {
            throw DimensionError("cores without DACs take +-1 inputs only");
        }
    }
    return crossbar_layer_forward_levels(crossbar, levels);
}

CoreCost reference_core_cost(CoreType t)
{
    switch (t) {
    case CoreType::risc:
        return {0.524, 87.0, 54.0, 3.97e-5};
    case CoreType::digital:
        return {0.208, 24.2, 6.94, 1.28e-6};
    case CoreType::itim:
        return {0.0082, 0.0888, 0.0118, 9e-8};
    }
    throw ConfigError("unknown core type");
}

double risc_time_per_pattern(const RiscWorkload &w)
{
    if (const auto *s = std::get_if<SynapseWorkload>(&w)) {
        return s->synapses * risc_seconds_per_synapse;
    }
    const auto &op = std::get<OpWorkload>(w);
    return op.ops * op.seconds_per_op;
}

} // namespace xbarsim
