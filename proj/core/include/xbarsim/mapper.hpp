#pragma once

#include <string>
#include <vector>

#include "xbarsim/cores.hpp"
#include "xbarsim/nn_model.hpp"

namespace xbarsim {

struct CoreShape {
    std::size_t max_inputs = 128;
    std::size_t max_neurons = 64;
    // Memristor crossbars spend a row on the bias; digital cores preload it.
    bool bias_uses_row = true;

    bool operator==(const CoreShape &) const = default;
};

// Hardware a network is compiled for.
struct MapperTarget {
    CoreType type = CoreType::itim;
    DigitalCoreConfig digital;
    MemristorCoreConfig memristor;

    static MapperTarget digital_target(const DigitalCoreConfig &cfg = {});
    static MapperTarget itim_target(const MemristorCoreConfig &cfg = {});
    CoreShape shape() const;
    int output_bits_per_neuron() const;
    double clock_hz() const;
};

// Contiguous neuron range of one layer that shares a core.
struct NeuronTile {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t signal_rows = 0; // distinct non-bias inputs
    bool uses_bias = false;

    std::size_t neurons() const { return end - begin; }
    std::size_t rows(const CoreShape &s) const
    {
        return signal_rows + (uses_bias && s.bias_uses_row ? 1 : 0);
    }
};

// Consecutive neurons with identical input sets form a family; each family
// is cut into balanced blocks of at most max_neurons. Requires every
// neuron's input rows to fit the core.
std::vector<NeuronTile> tile_layer(const LayerSpec &layer, const CoreShape &shape);

struct SplitLayer {
    // The layer itself when it fits, otherwise a linear partial-sum layer
    // followed by one or more combiner layers; the last entry carries the
    // original activation.
    std::vector<LayerSpec> layers;
    std::size_t input_blocks = 1;  // of the first level
    std::size_t neuron_blocks = 1; // per input block
    std::size_t tiles = 1;         // partial tiles of the first level
    bool split() const { return layers.size() > 1; }
};

// Splits a layer whose neurons need more than max_inputs rows: every neuron
// is cut into ceil(rows / M) balanced partial neurons (bias in the first
// block) and a combiner with unit weights sums the partials. Combiners
// whose fan-in still exceeds M are split again.
SplitLayer split_layer(const LayerSpec &layer, const CoreShape &shape);

struct RewrittenNetwork {
    NetworkSpec net;
    std::vector<std::size_t> source_layer; // original layer of each layer
    std::vector<bool> combiner;            // layer is a combiner
};
RewrittenNetwork rewrite_network(const NetworkSpec &net, const CoreShape &shape);

// Retrains a split network on its own topology; returns it unchanged when
// no layer was split.
NetworkSpec retrain_split(const NetworkSpec &original, const NetworkSpec &rewritten,
        const LabeledDataset &data, const TrainOptions &opt);

// One network of an application; `copies` independent instances run in
// parallel, `stage_offset` orders networks that feed each other.
struct AppNetwork {
    NetworkSpec net;
    std::size_t copies = 1;
    std::size_t stage_offset = 0;
};

enum class CoreKind { digital, memristor_dac, memristor_plain };
std::string core_kind_name(CoreKind k);

struct SubLayer {
    std::size_t network = 0;
    std::size_t copy = 0;
    std::size_t layer = 0; // in the rewritten network
    std::size_t source_layer = 0;
    bool is_combiner = false;
    NeuronTile tile;
    std::size_t stage = 0;
    bool primary_input = false; // reads the application inputs
};

struct CoreSlot {
    std::size_t id = 0;
    CoreKind kind = CoreKind::digital;
    std::size_t stage = 0;
    std::vector<SubLayer> sublayers;
    std::size_t rows_used = 0;
    std::size_t neurons_used = 0;
    double busy_time = 0.0; // seconds per pattern
};

struct CoreAllocation {
    std::string name;
    MapperTarget target;
    std::vector<AppNetwork> networks;
    std::vector<RewrittenNetwork> rewritten;
    std::vector<std::size_t> stage_base; // first stage of each network
    std::vector<CoreSlot> cores;
    std::vector<double> stage_latencies;
    double max_core_busy = 0.0;
    double routing_latency = 0.0;
    double interval = 0.0; // seconds between patterns for one instance
    std::size_t replication = 1;

    std::size_t instance_cores() const { return cores.size(); }
    std::size_t total_cores() const { return cores.size() * replication; }
    std::size_t stage_count() const { return stage_latencies.size(); }
    void check_capacity() const;
};

// Greedy first-fit placement of all tiles, in pipeline-stage order, onto
// the fewest cores the policy finds.
CoreAllocation pack_cores(const std::vector<AppNetwork> &networks, const MapperTarget &target,
        const std::string &name = "");

double core_busy_time(const CoreSlot &core, const MapperTarget &target);

// Sets interval = max(max core busy, routing latency) and
// replication = ceil(rate * interval). Throws on rate <= 0.
CoreAllocation replicate_for_rate(CoreAllocation alloc, double required_rate);

} // namespace xbarsim
