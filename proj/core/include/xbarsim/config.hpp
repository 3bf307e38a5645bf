#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xbarsim/catalog.hpp"
#include "xbarsim/estimator.hpp"
#include "xbarsim/programmer.hpp"

namespace xbarsim {

struct DatasetConfig {
    std::string root; // empty: $XBARSIM_DATA, then synthetic glyphs
    std::size_t train = 10000;
    std::size_t test = 2000;
};

struct QuantConfig {
    std::size_t hidden = 64;
    std::size_t epochs = 8;
    double learning_rate = 0.05;
    std::vector<int> bits{8, 6, 4};
};

struct ValidationConfig {
    std::size_t instances = 100;
    std::size_t rows = 128;
    std::size_t cols = 64;
    std::vector<double> wire_r{0.0, 0.5, 1.0, 2.0, 5.0};
    std::size_t program_targets = 10000;
    std::size_t agreement_inputs = 1000;
    std::size_t agreement_rows = 127; // plus the bias row
    std::size_t agreement_cols = 64;
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::vector<AppId> apps{all_apps.begin(), all_apps.end()};
    std::vector<CoreType> archs{all_archs.begin(), all_archs.end()};
    DatasetConfig dataset;
    QuantConfig quant;
    ValidationConfig validation;
    ProgrammingConfig programming;
    double wire_r = 1.0; // ohms per segment for `program`
    EstimatorOptions estimator;
    CostScaling scaling;
    double character_rate = 1e5;
    FrameGeometry frame;
    FrameGeometry sweep_frame{2500, 2500, 60.0};
    std::vector<CoreSize> memristor_sizes = default_sweep_sizes(CoreType::itim);
    std::vector<CoreSize> digital_sizes = default_sweep_sizes(CoreType::digital);

    void validate() const;
};

// INI text with [run], [dataset], [quant], [validate], [programming],
// [estimator], [digital], [memristor] and [sweep] sections. Unknown
// sections or keys raise ConfigError.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::filesystem::path &path);
// Canonical INI rendering of every setting; parse_config round-trips it.
std::string config_text(const ExperimentConfig &cfg);
std::string config_hash(const ExperimentConfig &cfg);

} // namespace xbarsim
