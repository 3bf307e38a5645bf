#include "xbarsim/mapper.hpp"

#include <algorithm>
#include <map>

namespace xbarsim {

MapperTarget MapperTarget::digital_target(const DigitalCoreConfig &cfg)
{
    MapperTarget t;
    t.type = CoreType::digital;
    t.digital = cfg;
    return t;
}

MapperTarget MapperTarget::itim_target(const MemristorCoreConfig &cfg)
{
    MapperTarget t;
    t.type = CoreType::itim;
    t.memristor = cfg;
    return t;
}

CoreShape MapperTarget::shape() const
{
    if (type == CoreType::digital) {
        return {digital.max_inputs, digital.max_neurons, false};
    }
    if (type == CoreType::itim) {
        return {memristor.max_inputs, memristor.max_neurons, true};
    }
    throw ConfigError("RISC cores are not neural mapping targets");
}

int MapperTarget::output_bits_per_neuron() const
{
    return type == CoreType::digital ? digital.io_bits : memristor.output_bits_per_neuron;
}

double MapperTarget::clock_hz() const
{
    return type == CoreType::digital ? digital.clock_hz : memristor.clock_hz;
}

std::string core_kind_name(CoreKind k)
{
    switch (k) {
    case CoreKind::digital:
        return "digital";
    case CoreKind::memristor_dac:
        return "memristor_dac";
    case CoreKind::memristor_plain:
        return "memristor_plain";
    }
    return "?";
}

namespace {

struct InputSet {
    std::vector<std::size_t> signal;
    bool bias = false;
    bool operator==(const InputSet &) const = default;
};

InputSet inputs_of(const LayerSpec &layer, std::size_t j)
{
    InputSet s;
    for (std::size_t i = 0; i < layer.n_inputs; ++i) {
        if (layer.connected(i, j)) {
            s.signal.push_back(i);
        }
    }
    s.bias = layer.bias_enabled && layer.connected(layer.n_inputs, j);
    return s;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Balanced cut of n items into k groups; the first n % k groups get one more.
std::vector<std::size_t> balanced_sizes(std::size_t n, std::size_t k)
{
    std::vector<std::size_t> sizes(k, n / k);
    for (std::size_t t = 0; t < n % k; ++t) {
        ++sizes[t];
    }
    return sizes;
}

} // namespace

std::vector<NeuronTile> tile_layer(const LayerSpec &layer, const CoreShape &shape)
{
    const std::size_t n = layer.n_neurons;
    std::vector<NeuronTile> tiles;
    const auto emit_family = [&](std::size_t begin, std::size_t end, const InputSet &in) {
        NeuronTile proto{0, 0, in.signal.size(), in.bias};
        if (proto.rows(shape) > shape.max_inputs) {
            throw DimensionError("tile_layer: neuron inputs exceed the core rows; split first");
        }
        std::size_t at = begin;
        for (const std::size_t size : balanced_sizes(end - begin, ceil_div(end - begin, shape.max_neurons))) {
            NeuronTile t = proto;
            t.begin = at;
            t.end = at + size;
            at += size;
            tiles.push_back(t);
        }
    };
    if (n == 0) {
        return tiles;
    }
    if (layer.mask.empty()) {
        InputSet all;
        all.signal.resize(layer.n_inputs);
        all.bias = layer.bias_enabled;
        emit_family(0, n, all);
        return tiles;
    }
    std::size_t begin = 0;
    InputSet current = inputs_of(layer, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        InputSet next;
        if (j < n) {
            next = inputs_of(layer, j);
            if (next == current) {
                continue;
            }
        }
        emit_family(begin, j, current);
        begin = j;
        current = std::move(next);
    }
    return tiles;
}

SplitLayer split_layer(const LayerSpec &layer, const CoreShape &shape)
{
    layer.validate();
    if (shape.max_inputs == 0 || shape.max_neurons == 0) {
        throw ConfigError("core shape must be at least 1x1");
    }
    const std::size_t m = shape.max_inputs;
    const std::size_t b = layer.n_neurons;
    std::vector<InputSet> sets(b);
    std::size_t widest = 0;
    for (std::size_t j = 0; j < b; ++j) {
        sets[j] = inputs_of(layer, j);
        widest = std::max(widest, sets[j].signal.size() + (sets[j].bias && shape.bias_uses_row ? 1 : 0));
    }

    SplitLayer out;
    if (widest <= m) {
        out.layers = {layer};
        out.neuron_blocks = ceil_div(b, shape.max_neurons);
        out.tiles = tile_layer(layer, shape).size();
        return out;
    }

    // Row lists per neuron; a row-consuming bias goes first so that it lands
    // in block 0.
    const std::size_t bias_row = layer.n_inputs;
    std::vector<std::vector<std::size_t>> groups_flat(b);
    std::vector<std::vector<std::size_t>> group_size(b);
    std::size_t k_max = 0;
    for (std::size_t j = 0; j < b; ++j) {
        auto &rows = groups_flat[j];
        if (sets[j].bias && shape.bias_uses_row) {
            rows.push_back(bias_row);
        }
        rows.insert(rows.end(), sets[j].signal.begin(), sets[j].signal.end());
        const std::size_t k = std::max<std::size_t>(1, ceil_div(rows.size(), m));
        group_size[j] = balanced_sizes(rows.size(), k);
        k_max = std::max(k_max, k);
    }
    // Partial neuron index of (block t, neuron j), block-major.
    std::vector<std::vector<std::size_t>> partial_of(k_max);
    std::size_t n_partial = 0;
    for (std::size_t t = 0; t < k_max; ++t) {
        for (std::size_t j = 0; j < b; ++j) {
            partial_of[t].push_back(t < group_size[j].size() ? n_partial++ : SIZE_MAX);
        }
    }

    LayerSpec partial;
    partial.n_inputs = layer.n_inputs;
    partial.n_neurons = n_partial;
    partial.activation = Linear{};
    partial.bias_enabled = layer.bias_enabled;
    partial.weights = Matrix(layer.weight_rows(), n_partial);
    partial.mask.assign(layer.weight_rows() * n_partial, 0);
    for (std::size_t j = 0; j < b; ++j) {
        std::size_t at = 0;
        for (std::size_t t = 0; t < group_size[j].size(); ++t) {
            const std::size_t p = partial_of[t][j];
            for (std::size_t r = 0; r < group_size[j][t]; ++r, ++at) {
                const std::size_t row = groups_flat[j][at];
                partial.weights(row, p) = layer.weights(row, j);
                partial.mask[row * n_partial + p] = 1;
            }
        }
        if (sets[j].bias && !shape.bias_uses_row) {
            const std::size_t p = partial_of[0][j];
            partial.weights(bias_row, p) = layer.weights(bias_row, j);
            partial.mask[bias_row * n_partial + p] = 1;
        }
    }

    LayerSpec combiner;
    combiner.n_inputs = n_partial;
    combiner.n_neurons = b;
    combiner.activation = layer.activation;
    combiner.bias_enabled = false;
    combiner.weights = Matrix(n_partial, b);
    combiner.mask.assign(n_partial * b, 0);
    for (std::size_t j = 0; j < b; ++j) {
        for (std::size_t t = 0; t < group_size[j].size(); ++t) {
            const std::size_t p = partial_of[t][j];
            combiner.weights(p, j) = 1.0;
            combiner.mask[p * b + j] = 1;
        }
    }

    out.input_blocks = k_max;
    out.neuron_blocks = ceil_div(b, shape.max_neurons);
    out.tiles = tile_layer(partial, shape).size();
    out.layers.push_back(std::move(partial));
    if (k_max > m) {
        auto next = split_layer(combiner, shape);
        out.layers.insert(out.layers.end(), next.layers.begin(), next.layers.end());
    } else {
        out.layers.push_back(std::move(combiner));
    }
    return out;
}

RewrittenNetwork rewrite_network(const NetworkSpec &net, const CoreShape &shape)
{
    net.validate();
    RewrittenNetwork out;
    out.net.name = net.name;
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        auto s = split_layer(net.layers[k], shape);
        for (std::size_t i = 0; i < s.layers.size(); ++i) {
            out.net.layers.push_back(std::move(s.layers[i]));
            out.source_layer.push_back(k);
            out.combiner.push_back(i > 0);
        }
    }
    out.net.validate();
    return out;
}

NetworkSpec retrain_split(const NetworkSpec &original, const NetworkSpec &rewritten,
        const LabeledDataset &data, const TrainOptions &opt)
{
    if (rewritten.layers.size() == original.layers.size()) {
        return rewritten;
    }
    return train_sgd(rewritten, data, opt).net;
}

double core_busy_time(const CoreSlot &core, const MapperTarget &target)
{
    if (target.type == CoreType::digital) {
        std::size_t rows = 0;
        for (const auto &s : core.sublayers) {
            rows += s.tile.signal_rows;
        }
        return digital_core_latency(target.digital, rows);
    }
    std::map<std::size_t, std::size_t> outputs_per_stage;
    for (const auto &s : core.sublayers) {
        outputs_per_stage[s.stage] += s.tile.neurons();
    }
    double t = 0.0;
    for (const auto &[stage, outputs] : outputs_per_stage) {
        t += memristor_core_latency(target.memristor, outputs);
    }
    return t;
}

void CoreAllocation::check_capacity() const
{
    const CoreShape shape = target.shape();
    for (const auto &c : cores) {
        if (c.rows_used > shape.max_inputs || c.neurons_used > shape.max_neurons) {
            throw DimensionError("core " + std::to_string(c.id) + " exceeds its capacity");
        }
    }
}

CoreAllocation pack_cores(const std::vector<AppNetwork> &networks, const MapperTarget &target,
        const std::string &name)
{
    const CoreShape shape = target.shape();
    CoreAllocation alloc;
    alloc.name = name;
    alloc.target = target;
    alloc.networks = networks;

    std::size_t max_offset = 0;
    for (const auto &n : networks) {
        if (n.copies == 0) {
            throw ConfigError("application network with zero copies");
        }
        alloc.rewritten.push_back(rewrite_network(n.net, shape));
        max_offset = std::max(max_offset, n.stage_offset);
    }
    // First stage of each offset group: after the deepest network of the
    // previous group.
    std::vector<std::size_t> base(max_offset + 1, 0);
    for (std::size_t s = 1; s <= max_offset; ++s) {
        base[s] = base[s - 1];
        for (std::size_t k = 0; k < networks.size(); ++k) {
            if (networks[k].stage_offset == s - 1) {
                base[s] = std::max(base[s], base[s - 1] + alloc.rewritten[k].net.layers.size());
            }
        }
    }
    std::vector<SubLayer> subs;
    for (std::size_t k = 0; k < networks.size(); ++k) {
        alloc.stage_base.push_back(base[networks[k].stage_offset]);
        const auto &rw = alloc.rewritten[k];
        std::vector<std::vector<NeuronTile>> tiles;
        for (const auto &layer : rw.net.layers) {
            tiles.push_back(tile_layer(layer, shape));
        }
        for (std::size_t c = 0; c < networks[k].copies; ++c) {
            for (std::size_t l = 0; l < rw.net.layers.size(); ++l) {
                for (const auto &t : tiles[l]) {
                    SubLayer s;
                    s.network = k;
                    s.copy = c;
                    s.layer = l;
                    s.source_layer = rw.source_layer[l];
                    s.is_combiner = rw.combiner[l];
                    s.tile = t;
                    s.stage = alloc.stage_base[k] + l;
                    s.primary_input = l == 0 && networks[k].stage_offset == 0;
                    subs.push_back(s);
                }
            }
        }
    }
    std::stable_sort(subs.begin(), subs.end(),
            [](const SubLayer &a, const SubLayer &b) { return a.stage < b.stage; });

    struct Fill {
        std::size_t signal = 0;
        bool bias = false;
        bool dac = false;
    };
    std::vector<Fill> fill;
    for (const auto &s : subs) {
        const auto rows_with = [&](const Fill &f) {
            const bool bias = (f.bias || s.tile.uses_bias) && shape.bias_uses_row;
            return f.signal + s.tile.signal_rows + (bias ? 1 : 0);
        };
        // DAC-driven rows and level-driven rows never share a crossbar.
        const bool dac = s.primary_input && shape.bias_uses_row;
        std::size_t chosen = alloc.cores.size();
        for (std::size_t c = 0; c < alloc.cores.size(); ++c) {
            if (fill[c].dac == dac && rows_with(fill[c]) <= shape.max_inputs
                    && alloc.cores[c].neurons_used + s.tile.neurons() <= shape.max_neurons) {
                chosen = c;
                break;
            }
        }
        if (chosen == alloc.cores.size()) {
            CoreSlot core;
            core.id = chosen;
            core.stage = s.stage;
            alloc.cores.push_back(core);
            fill.push_back({0, false, dac});
        }
        auto &core = alloc.cores[chosen];
        core.rows_used = rows_with(fill[chosen]);
        fill[chosen].signal += s.tile.signal_rows;
        fill[chosen].bias = fill[chosen].bias || s.tile.uses_bias;
        core.neurons_used += s.tile.neurons();
        core.stage = std::min(core.stage, s.stage);
        core.sublayers.push_back(s);
    }

    std::size_t n_stages = 0;
    for (auto &core : alloc.cores) {
        const bool primary = std::any_of(core.sublayers.begin(), core.sublayers.end(),
                [](const SubLayer &s) { return s.primary_input; });
        core.kind = target.type == CoreType::digital
                ? CoreKind::digital
                : (primary ? CoreKind::memristor_dac : CoreKind::memristor_plain);
        core.busy_time = core_busy_time(core, target);
        alloc.max_core_busy = std::max(alloc.max_core_busy, core.busy_time);
        for (const auto &s : core.sublayers) {
            n_stages = std::max(n_stages, s.stage + 1);
        }
    }
    alloc.stage_latencies.assign(n_stages, 0.0);
    for (const auto &core : alloc.cores) {
        alloc.stage_latencies[core.stage] = std::max(alloc.stage_latencies[core.stage], core.busy_time);
    }
    alloc.interval = alloc.max_core_busy;
    alloc.check_capacity();
    return alloc;
}

CoreAllocation replicate_for_rate(CoreAllocation alloc, double required_rate)
{
    if (!(required_rate > 0.0)) {
        throw ConfigError("replicate_for_rate: required rate must be positive");
    }
    alloc.interval = std::max(alloc.max_core_busy, alloc.routing_latency);
    alloc.replication = static_cast<std::size_t>(std::max(1LL, ceil_count(required_rate * alloc.interval)));
    return alloc;
}

} // namespace xbarsim
