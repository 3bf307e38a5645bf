#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "xbarsim/common.hpp"
#include "xbarsim/crossbar.hpp"
#include "xbarsim/device.hpp"

namespace xbarsim {

struct ProgrammingConfig {
    double v_write = 4.25;
    double pulse_width = 1e-9;
    double min_pulse_width = 0.1e-9;
    double v_read = 0.5;
    double r_sense = 100e3;
    int adc_bits = 8;
    double tolerance = 1.0 / 128.0; // fraction of g_max - g_min
    std::size_t max_pulses = 200;
    double variation_sigma = 0.05;
    std::uint64_t seed = 1;

    void validate(const DeviceParams &p) const;
};

// 1T1M array: one device state per physical row and column. Physical row
// 2i is the true line of logical row i, 2i+1 the inverted line.
struct DeviceArray {
    DeviceParams params;
    std::size_t physical_rows = 0;
    std::size_t cols = 0;
    std::vector<DeviceState> states;

    static DeviceArray fresh(const DeviceParams &p, std::size_t physical_rows, std::size_t cols);
    DeviceState &at(std::size_t r, std::size_t c) { return states[r * cols + c]; }
    DeviceState at(std::size_t r, std::size_t c) const { return states[r * cols + c]; }
    double conductance(std::size_t r, std::size_t c) const
    {
        return small_signal_conductance(params, at(r, c));
    }
    // Crossbar view using the small-signal conductances of the devices.
    CrossbarInstance to_crossbar(std::size_t n_inputs, bool bias_row, double wire_r_segment) const;
};

inline constexpr double open_circuit = std::numeric_limits<double>::infinity();

struct ReadResult {
    double resistance = open_circuit; // estimate, +inf if the ADC reads 0
    int code = 0;
    double column_voltage = 0.0; // before quantization
};

// Divider read of a single device through the sense resistor and ADC.
ReadResult read_resistance(double r_device, const ProgrammingConfig &cfg);
ReadResult read_device(const DeviceArray &a, std::size_t row, std::size_t col,
        const ProgrammingConfig &cfg);
inline double estimated_conductance(const ReadResult &r)
{
    return r.resistance == open_circuit ? 0.0 : 1.0 / r.resistance;
}

struct DeviceProgramResult {
    std::size_t pulses = 0;
    std::size_t reads = 0;
    bool converged = false; // by the verify read
};

DeviceProgramResult program_device(DeviceArray &a, std::size_t row, std::size_t col,
        double target_g, const ProgrammingConfig &cfg, Rng &rng);

struct DeviceRecord {
    std::size_t row = 0;
    std::size_t col = 0;
    std::size_t pulses = 0;
    std::size_t reads = 0;
    double target_g = 0.0;
    double achieved_g = 0.0;
    bool converged = false;
};

struct ProgrammingReport {
    std::vector<DeviceRecord> devices;
    std::vector<std::size_t> failures; // indices into devices
    std::size_t total_steps = 0;       // reads + write pulses, serialized

    double failure_rate() const
    {
        return devices.empty() ? 0.0 : static_cast<double>(failures.size()) / devices.size();
    }
};

// Programs every device sequentially (one shared ADC per core) toward the
// conductances of `targets` (row-major logical pairs).
ProgrammingReport program_core(DeviceArray &a, const std::vector<SynapsePair> &targets,
        const ProgrammingConfig &cfg);

} // namespace xbarsim
