#pragma once

#include <optional>
#include <vector>

#include "xbarsim/mapper.hpp"

namespace xbarsim {

enum class Placement { stage_order, spread_dac };

struct MeshConfig {
    std::size_t width = 0;
    std::size_t height = 0;
    int link_bits = 8;
    double clock_hz = 2e8;
    std::optional<double> hop_energy_pj_per_flit;
    Placement placement = Placement::stage_order;

    // Smallest square mesh holding `cores`.
    static MeshConfig minimal_square(std::size_t cores);
};

inline constexpr double default_hop_energy_pj = 0.98;

struct Coord {
    std::size_t x = 0;
    std::size_t y = 0;
    bool operator==(const Coord &) const = default;
};

// Row-major positions in (stage, core id) order. With spread_dac the DAC
// cores are instead spaced evenly over the mesh. Throws if the mesh is too
// small.
std::vector<Coord> place_cores(const CoreAllocation &alloc, const MeshConfig &mesh);

// Neuron outputs one core sends to another (or to itself) per pattern.
struct FlowDemand {
    std::size_t src_core = 0;
    std::size_t dst_core = 0;
    std::size_t neurons = 0;
    std::size_t payload_bits = 0;
};

// One entry per ordered (producer, consumer) core pair, sorted by that pair.
std::vector<FlowDemand> derive_flows(const CoreAllocation &alloc);

enum class Direction { east, west, north, south, loopback };

struct Link {
    std::size_t x = 0;
    std::size_t y = 0;
    Direction dir = Direction::east;
    auto operator<=>(const Link &) const = default;
};

struct ScheduledFlow {
    FlowDemand demand;
    std::size_t flits = 0;
    std::vector<Link> route; // a loopback flow has one loopback link
    std::size_t start_slot = 0;

    std::size_t hops() const { return route.size(); }
    bool loopback() const { return route.size() == 1 && route[0].dir == Direction::loopback; }
    // Flit f occupies link h during slot start + h + f.
    std::size_t finish_cycle() const { return start_slot + flits + hops(); }
};

struct SlotTable {
    std::vector<ScheduledFlow> flows;
    std::size_t latency_cycles = 0;
};

// XY dimension-ordered route; empty for src == dst.
std::vector<Link> xy_route(Coord src, Coord dst);

// Greedy earliest-start schedule in flow order.
SlotTable build_schedule(const std::vector<FlowDemand> &flows, const std::vector<Coord> &placement,
        const MeshConfig &mesh);

bool is_conflict_free(const SlotTable &table);

double routing_latency(const SlotTable &table, const MeshConfig &mesh);
std::size_t flit_hops(const SlotTable &table);
// Joules for `patterns` patterns. Throws ConfigError if the hop energy is not
// configured.
double routing_energy(const SlotTable &table, double patterns, const MeshConfig &mesh);

struct RoutedAllocation {
    MeshConfig mesh;
    std::vector<Coord> placement;
    SlotTable table;
};

// Minimal mesh, placement and schedule for an allocation; also stores the
// routing latency in alloc.
RoutedAllocation route_allocation(CoreAllocation &alloc, std::optional<double> hop_energy_pj,
        Placement placement = Placement::stage_order);

} // namespace xbarsim
