#include "xbarsim/programmer.hpp"

#include <cmath>

namespace xbarsim {

void ProgrammingConfig::validate(const DeviceParams &p) const
{
    if (!(v_read > 0.0) || v_read >= p.v_p) {
        throw ConfigError("programmer: v_read must be positive and below the switching threshold");
    }
    if (!(tolerance > 0.0)) {
        throw ConfigError("programmer: tolerance must be positive");
    }
    if (!(pulse_width > 0.0) || pulse_width > 80e-9 || !(min_pulse_width > 0.0)
            || min_pulse_width > pulse_width) {
        throw ConfigError("programmer: pulse widths must satisfy 0 < min <= width <= 80 ns");
    }
    if (!(r_sense > 0.0) || adc_bits < 1 || adc_bits > 24 || variation_sigma < 0.0) {
        throw ConfigError("programmer: bad sense resistor, ADC width or variation");
    }
    if (v_write <= p.v_p || v_write <= p.v_n) {
        throw ConfigError("programmer: v_write must exceed both switching thresholds");
    }
}

DeviceArray DeviceArray::fresh(const DeviceParams &p, std::size_t physical_rows, std::size_t cols)
{
    DeviceArray a;
    a.params = p;
    a.physical_rows = physical_rows;
    a.cols = cols;
    a.states.assign(physical_rows * cols, fresh_device(p));
    return a;
}

CrossbarInstance DeviceArray::to_crossbar(std::size_t n_inputs, bool bias_row,
        double wire_r_segment) const
{
    CrossbarInstance xb;
    xb.n_inputs = n_inputs;
    xb.n_neurons = cols;
    xb.bias_row = bias_row;
    xb.wire_r_segment = wire_r_segment;
    xb.bounds = ConductanceBounds::of(params);
    if (2 * xb.rows() != physical_rows) {
        throw DimensionError("device array row count does not match the crossbar shape");
    }
    xb.pairs.resize(xb.rows() * cols);
    for (std::size_t i = 0; i < xb.rows(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            xb.pair(i, j) = {conductance(2 * i, j), conductance(2 * i + 1, j)};
        }
    }
    return xb;
}

ReadResult read_resistance(double r_device, const ProgrammingConfig &cfg)
{
    ReadResult r;
    r.column_voltage = cfg.v_read * cfg.r_sense / (cfg.r_sense + r_device);
    const double full = static_cast<double>((1LL << cfg.adc_bits) - 1);
    r.code = static_cast<int>(std::lround(r.column_voltage / cfg.v_read * full));
    if (r.code == 0) {
        r.resistance = open_circuit;
        return r;
    }
    const double v_hat = r.code / full * cfg.v_read;
    r.resistance = cfg.r_sense * (cfg.v_read - v_hat) / v_hat;
    return r;
}

ReadResult read_device(const DeviceArray &a, std::size_t row, std::size_t col,
        const ProgrammingConfig &cfg)
{
    return read_resistance(1.0 / a.conductance(row, col), cfg);
}

DeviceProgramResult program_device(DeviceArray &a, std::size_t row, std::size_t col,
        double target_g, const ProgrammingConfig &cfg, Rng &rng)
{
    const auto &p = a.params;
    const double slack = 1e-12 * p.g_max();
    if (target_g < p.g_min() - slack || target_g > p.g_max() + slack) {
        throw DimensionError("program_device: target conductance outside device bounds");
    }
    const double band = cfg.tolerance * (p.g_max() - p.g_min());
    DeviceProgramResult res;
    double width = cfg.pulse_width;
    int last_sign = 0;
    while (true) {
        const double g_hat = estimated_conductance(read_device(a, row, col, cfg));
        ++res.reads;
        const double err = target_g - g_hat;
        if (std::abs(err) <= band) {
            res.converged = true;
            return res;
        }
        if (res.pulses >= cfg.max_pulses) {
            return res;
        }
        const int sign = err > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            width = std::max(width / 2.0, cfg.min_pulse_width);
        }
        const double multiplier = cfg.variation_sigma > 0.0
                ? std::exp(cfg.variation_sigma * rng.normal())
                : 1.0;
        a.at(row, col) = step_state(p, a.at(row, col), sign * cfg.v_write, width, multiplier);
        ++res.pulses;
        last_sign = sign;
    }
}

ProgrammingReport program_core(DeviceArray &a, const std::vector<SynapsePair> &targets,
        const ProgrammingConfig &cfg)
{
    cfg.validate(a.params);
    if (targets.size() * 2 != a.states.size()) {
        throw DimensionError("program_core: target pairs do not cover the device array");
    }
    Rng rng(cfg.seed);
    ProgrammingReport report;
    const std::size_t logical_rows = a.physical_rows / 2;
    for (std::size_t i = 0; i < logical_rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) {
            const SynapsePair &t = targets[i * a.cols + j];
            for (const std::size_t r : {2 * i, 2 * i + 1}) {
                const double target = (r % 2 == 0) ? t.g_plus : t.g_minus;
                const auto res = program_device(a, r, j, target, cfg, rng);
                DeviceRecord rec{r, j, res.pulses, res.reads, target, a.conductance(r, j), res.converged};
                if (!res.converged) {
                    report.failures.push_back(report.devices.size());
                }
                report.total_steps += res.pulses + res.reads;
                report.devices.push_back(rec);
            }
        }
    }
    return report;
}

} // namespace xbarsim
