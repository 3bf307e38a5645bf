#include "xbarsim/noc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace xbarsim {

MeshConfig MeshConfig::minimal_square(std::size_t cores)
{
    MeshConfig m;
    std::size_t side = 1;
    while (side * side < cores) {
        ++side;
    }
    m.width = side;
    m.height = side;
    return m;
}

std::vector<Coord> place_cores(const CoreAllocation &alloc, const MeshConfig &mesh)
{
    const std::size_t n = alloc.cores.size();
    if (mesh.width * mesh.height < n) {
        throw ConfigError("mesh " + std::to_string(mesh.width) + "x" + std::to_string(mesh.height)
                + " cannot hold " + std::to_string(n) + " cores");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return alloc.cores[a].stage < alloc.cores[b].stage;
    });
    std::vector<std::size_t> position(n);
    if (mesh.placement == Placement::spread_dac) {
        std::vector<std::size_t> dac, rest;
        for (const std::size_t c : order) {
            (alloc.cores[c].kind == CoreKind::memristor_dac ? dac : rest).push_back(c);
        }
        std::vector<bool> taken(n, false);
        for (std::size_t i = 0; i < dac.size(); ++i) {
            const std::size_t p = i * n / dac.size();
            position[dac[i]] = p;
            taken[p] = true;
        }
        std::size_t p = 0;
        for (const std::size_t c : rest) {
            while (taken[p]) {
                ++p;
            }
            position[c] = p;
            taken[p] = true;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            position[order[i]] = i;
        }
    }
    std::vector<Coord> out(n);
    for (std::size_t c = 0; c < n; ++c) {
        out[c] = {position[c] % mesh.width, position[c] / mesh.width};
    }
    return out;
}

std::vector<FlowDemand> derive_flows(const CoreAllocation &alloc)
{
    using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;
    // owner[network][copy][layer][neuron] -> core
    std::vector<std::vector<std::vector<std::vector<std::size_t>>>> owner(alloc.networks.size());
    for (std::size_t k = 0; k < alloc.networks.size(); ++k) {
        const auto &layers = alloc.rewritten[k].net.layers;
        owner[k].resize(alloc.networks[k].copies);
        for (auto &per_copy : owner[k]) {
            for (const auto &layer : layers) {
                per_copy.emplace_back(layer.n_neurons, SIZE_MAX);
            }
        }
    }
    for (const auto &core : alloc.cores) {
        for (const auto &s : core.sublayers) {
            for (std::size_t n = s.tile.begin; n < s.tile.end; ++n) {
                owner[s.network][s.copy][s.layer][n] = core.id;
            }
        }
    }
    // Outputs of each offset group, concatenated in network/copy order.
    std::map<std::size_t, std::vector<Key>> group_outputs;
    for (std::size_t k = 0; k < alloc.networks.size(); ++k) {
        const auto &layers = alloc.rewritten[k].net.layers;
        for (std::size_t c = 0; c < alloc.networks[k].copies; ++c) {
            for (std::size_t n = 0; n < layers.back().n_neurons; ++n) {
                group_outputs[alloc.networks[k].stage_offset].emplace_back(k, c, layers.size() - 1, n);
            }
        }
    }

    std::map<std::pair<std::size_t, std::size_t>, std::set<Key>> traffic;
    for (const auto &core : alloc.cores) {
        for (const auto &s : core.sublayers) {
            const std::size_t offset = alloc.networks[s.network].stage_offset;
            if (s.layer == 0 && offset == 0) {
                continue;
            }
            const auto &layer = alloc.rewritten[s.network].net.layers[s.layer];
            const std::vector<Key> *upstream = nullptr;
            if (s.layer == 0) {
                upstream = &group_outputs[offset - 1];
                if (upstream->empty()) {
                    continue;
                }
            }
            for (std::size_t i = 0; i < layer.n_inputs; ++i) {
                bool used = layer.mask.empty();
                for (std::size_t j = s.tile.begin; !used && j < s.tile.end; ++j) {
                    used = layer.connected(i, j);
                }
                if (!used) {
                    continue;
                }
                const Key key = upstream ? (*upstream)[i % upstream->size()]
                                         : Key{s.network, s.copy, s.layer - 1, i};
                const std::size_t src = owner[std::get<0>(key)][std::get<1>(key)][std::get<2>(key)][std::get<3>(key)];
                traffic[{src, core.id}].insert(key);
            }
        }
    }
    const auto bits = static_cast<std::size_t>(alloc.target.output_bits_per_neuron());
    std::vector<FlowDemand> flows;
    for (const auto &[pair, keys] : traffic) {
        flows.push_back({pair.first, pair.second, keys.size(), keys.size() * bits});
    }
    return flows;
}

std::vector<Link> xy_route(Coord src, Coord dst)
{
    std::vector<Link> route;
    Coord at = src;
    while (at.x != dst.x) {
        const bool east = dst.x > at.x;
        route.push_back({at.x, at.y, east ? Direction::east : Direction::west});
        at.x = east ? at.x + 1 : at.x - 1;
    }
    while (at.y != dst.y) {
        const bool south = dst.y > at.y;
        route.push_back({at.x, at.y, south ? Direction::south : Direction::north});
        at.y = south ? at.y + 1 : at.y - 1;
    }
    return route;
}

namespace {

using Occupancy = std::map<Link, std::vector<char>>;

bool slot_busy(const Occupancy &occ, const Link &link, std::size_t slot)
{
    const auto it = occ.find(link);
    return it != occ.end() && slot < it->second.size() && it->second[slot] != 0;
}

void mark(Occupancy &occ, const Link &link, std::size_t slot)
{
    auto &v = occ[link];
    if (v.size() <= slot) {
        v.resize(slot + 1, 0);
    }
    v[slot] = 1;
}

} // namespace

SlotTable build_schedule(const std::vector<FlowDemand> &flows, const std::vector<Coord> &placement,
        const MeshConfig &mesh)
{
    if (mesh.link_bits <= 0) {
        throw ConfigError("mesh link width must be positive");
    }
    SlotTable table;
    Occupancy occ;
    for (const auto &d : flows) {
        ScheduledFlow f;
        f.demand = d;
        f.flits = (d.payload_bits + static_cast<std::size_t>(mesh.link_bits) - 1)
                / static_cast<std::size_t>(mesh.link_bits);
        const Coord a = placement.at(d.src_core), b = placement.at(d.dst_core);
        f.route = d.src_core == d.dst_core ? std::vector<Link>{{a.x, a.y, Direction::loopback}}
                                           : xy_route(a, b);
        std::size_t s = 0;
        while (true) {
            bool clash = false;
            for (std::size_t h = 0; h < f.route.size() && !clash; ++h) {
                for (std::size_t k = 0; k < f.flits && !clash; ++k) {
                    clash = slot_busy(occ, f.route[h], s + h + k);
                }
            }
            if (!clash) {
                break;
            }
            ++s;
        }
        f.start_slot = s;
        for (std::size_t h = 0; h < f.route.size(); ++h) {
            for (std::size_t k = 0; k < f.flits; ++k) {
                mark(occ, f.route[h], s + h + k);
            }
        }
        if (f.flits > 0) {
            table.latency_cycles = std::max(table.latency_cycles, f.finish_cycle());
        }
        table.flows.push_back(std::move(f));
    }
    return table;
}

bool is_conflict_free(const SlotTable &table)
{
    std::set<std::pair<Link, std::size_t>> used;
    for (const auto &f : table.flows) {
        for (std::size_t h = 0; h < f.route.size(); ++h) {
            for (std::size_t k = 0; k < f.flits; ++k) {
                if (!used.insert({f.route[h], f.start_slot + h + k}).second) {
                    return false;
                }
            }
        }
    }
    return true;
}

double routing_latency(const SlotTable &table, const MeshConfig &mesh)
{
    return static_cast<double>(table.latency_cycles) / mesh.clock_hz;
}

std::size_t flit_hops(const SlotTable &table)
{
    std::size_t total = 0;
    for (const auto &f : table.flows) {
        total += f.flits * f.hops();
    }
    return total;
}

double routing_energy(const SlotTable &table, double patterns, const MeshConfig &mesh)
{
    if (!mesh.hop_energy_pj_per_flit) {
        throw ConfigError("routing energy requested but hop_energy_pj_per_flit is not configured");
    }
    return static_cast<double>(flit_hops(table)) * *mesh.hop_energy_pj_per_flit * 1e-12 * patterns;
}

RoutedAllocation route_allocation(CoreAllocation &alloc, std::optional<double> hop_energy_pj,
        Placement placement)
{
    RoutedAllocation r;
    r.mesh = MeshConfig::minimal_square(alloc.instance_cores());
    r.mesh.clock_hz = alloc.target.clock_hz();
    r.mesh.hop_energy_pj_per_flit = hop_energy_pj;
    r.mesh.placement = placement;
    r.placement = place_cores(alloc, r.mesh);
    r.table = build_schedule(derive_flows(alloc), r.placement, r.mesh);
    alloc.routing_latency = routing_latency(r.table, r.mesh);
    return r;
}

} // namespace xbarsim
