#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "xbarsim/crossbar.hpp"
#include "xbarsim/nn_model.hpp"

namespace xbarsim {

enum class CoreType { risc, digital, itim };

std::string core_type_name(CoreType t);
CoreType parse_core_type(const std::string &name);

struct DigitalCoreConfig {
    std::size_t max_inputs = 256;
    std::size_t max_neurons = 128;
    int weight_bits = 8;
    int io_bits = 8;
    double clock_hz = 2e8;
    int accumulator_bits = 24;

    std::size_t synaptic_memory_bits() const
    {
        return max_inputs * max_neurons * static_cast<std::size_t>(weight_bits);
    }
    void validate() const;
};

// Serial digital core: inputs are broadcast one per cycle to all neuron
// accumulators, then each accumulator passes through the activation.
// Throws DimensionError if the layer does not fit or an accumulator
// overflows accumulator_bits.
QuantizedLayerResult digital_core_forward(const DigitalCoreConfig &cfg,
        const QuantizedLayer &layer, const QuantizedActivity &input);

// One input per clock; the bias is preloaded and costs no cycle.
double digital_core_latency(const DigitalCoreConfig &cfg, std::size_t inputs_used);

struct MemristorCoreConfig {
    std::size_t max_inputs = 128; // crossbar rows, bias row included
    std::size_t max_neurons = 64;
    bool has_dac = false;
    int crossbar_cycles = 2;
    double clock_hz = 2e8;
    int output_bits_per_neuron = 1;
    int link_bits = 8;
    int control_cycles = 8;

    void validate() const;
};

int output_transfer_cycles(const MemristorCoreConfig &cfg, std::size_t outputs_used);
double memristor_core_latency(const MemristorCoreConfig &cfg, std::size_t outputs_used);
// Control overhead (cycles) that makes `reference_outputs` take `reference_time`.
int calibrate_control_cycles(const MemristorCoreConfig &cfg, double reference_time = 9e-8,
        std::size_t reference_outputs = 64);

// DAC core fed 8-bit inputs.
std::vector<double> memristor_core_forward(const MemristorCoreConfig &cfg,
        const CrossbarSolver &crossbar, std::span<const std::uint8_t> inputs);
// Core without DAC fed +-1 outputs of upstream cores.
std::vector<double> memristor_core_forward(const MemristorCoreConfig &cfg,
        const CrossbarSolver &crossbar, std::span<const double> levels);

struct CoreCost {
    double area_mm2 = 0.0;
    double total_power_mw = 0.0;
    double leakage_power_mw = 0.0;
    double processing_time_s = 0.0;

    double dynamic_power_mw() const { return total_power_mw - leakage_power_mw; }
};

CoreCost reference_core_cost(CoreType t);

inline constexpr double risc_reference_time = 3.97e-5;
inline constexpr double risc_reference_synapses = 784.0;
inline constexpr double risc_seconds_per_synapse = risc_reference_time / risc_reference_synapses;

struct SynapseWorkload {
    double synapses = 0.0;
};
// Non-neural kernels: primitive operations per pattern times a per-op time.
struct OpWorkload {
    double ops = 0.0;
    double seconds_per_op = 0.0;
};
using RiscWorkload = std::variant<SynapseWorkload, OpWorkload>;

double risc_time_per_pattern(const RiscWorkload &w);

} // namespace xbarsim
