#pragma once

#include <span>
#include <string>
#include <vector>

#include "xbarsim/crossbar.hpp"
#include "xbarsim/nn_model.hpp"

namespace xbarsim {

enum class Engine { floating, quantized, crossbar };

std::string engine_name(Engine e);

// A network realized as one crossbar per layer. Weights are quantized to
// `bits` (0 keeps them exact) and normalized per layer; every layer but the
// last must use the threshold activation, since the inverter readout only
// produces +-1.
class CrossbarNetwork {
public:
    CrossbarNetwork(const NetworkSpec &net, int bits, ConductanceBounds bounds = {},
            double wire_r_segment = 0.0);

    // Last-layer column voltages; their argmax is the class decision.
    std::vector<double> scores(std::span<const std::uint8_t> pixels) const;
    std::size_t layers() const { return solvers_.size(); }

private:
    std::vector<CrossbarSolver> solvers_;
};

struct EngineOptions {
    int bits = 8;
    ConductanceBounds bounds;
    double wire_r_segment = 0.0;
};

double evaluate_accuracy(const NetworkSpec &net, const LabeledDataset &data, Engine engine,
        const EngineOptions &opt = {});

} // namespace xbarsim
