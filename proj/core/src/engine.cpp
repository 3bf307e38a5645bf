#include "xbarsim/engine.hpp"

namespace xbarsim {

std::string engine_name(Engine e)
{
    switch (e) {
    case Engine::floating:
        return "float";
    case Engine::quantized:
        return "quantized";
    case Engine::crossbar:
        return "crossbar";
    }
    return "?";
}

CrossbarNetwork::CrossbarNetwork(const NetworkSpec &net, int bits, ConductanceBounds bounds,
        double wire_r_segment)
{
    net.validate();
    const NetworkSpec exact = bits > 0 ? dequantize(quantize(net, bits)) : net;
    for (std::size_t k = 0; k < exact.layers.size(); ++k) {
        const auto &layer = exact.layers[k];
        if (k + 1 < exact.layers.size() && !std::holds_alternative<Threshold>(layer.activation)) {
            throw ConfigError("crossbar engine needs threshold activations on hidden layers");
        }
        auto [xb, scale] = make_crossbar(layer.weights, layer.bias_enabled, bounds, wire_r_segment);
        solvers_.emplace_back(xb);
    }
}

std::vector<double> CrossbarNetwork::scores(std::span<const std::uint8_t> pixels) const
{
    std::vector<double> v(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        v[i] = dac_convert(pixels[i]).true_line;
    }
    for (std::size_t k = 0; k + 1 < solvers_.size(); ++k) {
        v = crossbar_layer_forward_levels(solvers_[k], v);
    }
    return solvers_.back().solve(v);
}

double evaluate_accuracy(const NetworkSpec &net, const LabeledDataset &data, Engine engine,
        const EngineOptions &opt)
{
    switch (engine) {
    case Engine::floating:
        return evaluate_accuracy(net, data);
    case Engine::quantized:
        return evaluate_accuracy(quantize(net, opt.bits), data);
    case Engine::crossbar: {
        if (data.empty()) {
            throw DatasetError("evaluate_accuracy: empty dataset");
        }
        const CrossbarNetwork xnet(net, opt.bits, opt.bounds, opt.wire_r_segment);
        std::size_t correct = 0;
        for (std::size_t s = 0; s < data.size(); ++s) {
            correct += classify_scores(xnet.scores(data.sample(s))) == data.labels[s] ? 1 : 0;
        }
        return static_cast<double>(correct) / static_cast<double>(data.size());
    }
    }
    throw ConfigError("unknown engine");
}

} // namespace xbarsim
