#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "xbarsim/config.hpp"
#include "xbarsim/dataset.hpp"
#include "xbarsim/programmer.hpp"

namespace xbarsim {

// Output of one CLI subcommand: named report files plus a console summary.
struct RunOutput {
    std::map<std::string, std::string> files;
    std::string summary;
    bool ok = true; // false on a hard failure
};

RunOutput run_tables(const ExperimentConfig &cfg);
RunOutput run_quantization_study(const ExperimentConfig &cfg, const TrainTestSplit &data);
RunOutput run_crossbar_validation(const ExperimentConfig &cfg);
RunOutput run_sweep(const ExperimentConfig &cfg);
RunOutput run_map(const ExperimentConfig &cfg);
RunOutput run_program(const ExperimentConfig &cfg);

// MNIST from `root` when present, else synthetic digits.
TrainTestSplit load_digit_data(const std::string &root, std::size_t train, std::size_t test,
        std::uint64_t seed);

struct QuantRow {
    std::string activation; // sigmoid or threshold
    int bits = 0;           // 0 = float
    double accuracy = 0.0;
};
std::vector<QuantRow> quantization_study(const TrainTestSplit &data, const QuantConfig &q,
        std::uint64_t seed);

// Largest per-column |nodal - ideal| / max(|ideal|, 1e-12) at zero wire
// resistance over random rows x cols crossbars with a bias row.
double zero_wire_max_relative_error(std::size_t instances, std::size_t rows, std::size_t cols,
        std::uint64_t seed);
// Mean |nodal - ideal| column voltage on one random crossbar, per wire resistance.
std::vector<double> wire_error_curve(std::size_t rows, std::size_t cols,
        const std::vector<double> &wire_r, std::uint64_t seed);

struct ProgrammingStudy {
    std::size_t targets = 0;
    std::size_t verified = 0;         // verify read accepted within 100 pulses
    std::size_t within_tolerance = 0; // true conductance within tolerance at the end
    double mean_pulses = 0.0;
    std::size_t max_pulses = 0;
};
ProgrammingStudy programming_monte_carlo(std::size_t targets, const ProgrammingConfig &cfg);

struct AgreementStudy {
    std::size_t comparisons = 0;
    std::size_t agreeing = 0;
    std::size_t inputs = 0;
    std::size_t inputs_all_agree = 0;
    ProgrammingReport programming;
    double rate() const { return comparisons ? static_cast<double>(agreeing) / comparisons : 0.0; }
};
// Programs a random rows x cols layer (plus bias row) and compares its
// per-neuron threshold outputs with the exact-weight crossbar on random
// 8-bit inputs.
AgreementStudy programmed_agreement(std::size_t rows, std::size_t cols, std::size_t inputs,
        const ProgrammingConfig &cfg, double wire_r, std::uint64_t seed);

std::string junit_xml(const std::string &suite, const std::vector<std::pair<std::string, std::string>> &cases,
        const std::map<std::string, std::string> &properties);

} // namespace xbarsim
