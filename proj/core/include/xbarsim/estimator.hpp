#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xbarsim/catalog.hpp"
#include "xbarsim/cores.hpp"
#include "xbarsim/mapper.hpp"
#include "xbarsim/noc.hpp"

namespace xbarsim {

struct CostConstants {
    double tsv_pj_per_bit = 0.05;
    // Memristor cores draw no leakage while idle when set.
    bool nonvolatile_idle_off = false;
    std::optional<double> hop_energy_pj = default_hop_energy_pj;
};

double system_area(double core_count, CoreType t);
double system_area(double core_count, const CoreCost &per_core);

// Milliwatts spent moving `bits_per_pattern` over the TSVs at `rate`.
double tsv_io_power_mw(double bits_per_pattern, double rate, double pj_per_bit = 0.05);

struct PowerBreakdown {
    double leakage_mw = 0.0;
    double dynamic_mw = 0.0;
    double routing_mw = 0.0;
    double tsv_mw = 0.0;
    double max_duty = 0.0;
    bool saturated = false; // some core runs at duty 1

    double total_mw() const { return leakage_mw + dynamic_mw + routing_mw + tsv_mw; }
};

// Each instance of the allocation serves rate / replication patterns per
// second; a core's duty is that share times its busy time, capped at 1.
PowerBreakdown system_power(const CoreAllocation &alloc, double rate, double input_bits,
        const CoreCost &per_core, const CostConstants &consts, double routing_joules_per_pattern);

// Power of `count` cores that each run one pattern in the per-core
// processing time at `rate` (used with published core counts).
PowerBreakdown count_power(double count, CoreType t, double rate, double input_bits,
        const CostConstants &consts);

// Always-on RISC cores.
double risc_power_mw(double count);
long long risc_core_count(const RiscWorkload &w, double rate);

double efficiency_vs_risc(double risc_mw, double arch_mw);

struct EstimatorOptions {
    DigitalCoreConfig digital;
    MemristorCoreConfig memristor;
    CostConstants constants;
    Placement placement = Placement::stage_order;
    std::optional<CoreCost> digital_cost; // reference_core_cost() when empty
    std::optional<CoreCost> itim_cost;
};

struct ArchReport {
    CoreType arch = CoreType::risc;
    double cores = 0.0;
    std::size_t instance_cores = 0;
    std::size_t replication = 1;
    double interval_s = 0.0;
    double routing_latency_s = 0.0;
    double area_mm2 = 0.0;
    PowerBreakdown power;
    double efficiency = 1.0;
};

struct AppReport {
    AppId app = AppId::deep;
    double rate = 0.0;
    double input_bits = 0.0;
    std::vector<ArchReport> mapped;     // risc, digital, itim from our models
    std::vector<ArchReport> published_count; // same, with the published core counts
};

ArchReport map_and_cost(const AppCatalogEntry &entry, CoreType arch, const EstimatorOptions &opt);
AppReport estimate_app(const AppCatalogEntry &entry, const EstimatorOptions &opt = {});

// Analytic core cost versus array size: a fixed periphery share plus a
// part proportional to the number of synapse cells, anchored at the
// reference size.
struct CostScaling {
    double area_periphery = 0.3;
    double power_periphery = 0.3;
};
CoreCost scaled_core_cost(CoreType t, std::size_t rows, std::size_t cols, const CostScaling &s);

struct CoreSize {
    std::size_t rows = 0;
    std::size_t cols = 0;
};
std::vector<CoreSize> default_sweep_sizes(CoreType t);

struct SweepRow {
    std::string app;
    CoreSize size;
    double cores = 0.0;
    double area_mm2 = 0.0;
    double power_mw = 0.0;
    double area_norm = 0.0;
    double power_norm = 0.0;
};

std::vector<SweepRow> design_space_sweep(const std::vector<AppId> &apps,
        const std::vector<CoreSize> &sizes, CoreType arch, const EstimatorOptions &opt,
        const CostScaling &scaling, const FrameGeometry &frame = {2500, 2500, 60.0});
std::string sweep_csv(const std::vector<SweepRow> &rows);

} // namespace xbarsim
