#include "xbarsim/estimator.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace xbarsim {

double system_area(double core_count, CoreType t)
{
    return system_area(core_count, reference_core_cost(t));
}

double system_area(double core_count, const CoreCost &per_core)
{
    if (core_count < 0.0) {
        throw ConfigError("negative core count");
    }
    return core_count * per_core.area_mm2;
}

double tsv_io_power_mw(double bits_per_pattern, double rate, double pj_per_bit)
{
    return bits_per_pattern * rate * pj_per_bit * 1e-12 * 1e3;
}

namespace {

bool is_memristor(CoreKind k) { return k != CoreKind::digital; }

void add_core(PowerBreakdown &p, const CoreCost &c, double duty, bool idle_off)
{
    if (duty >= 1.0) {
        duty = 1.0;
        p.saturated = true;
    }
    p.max_duty = std::max(p.max_duty, duty);
    if (idle_off) {
        p.dynamic_mw += c.total_power_mw * duty;
    } else {
        p.leakage_mw += c.leakage_power_mw;
        p.dynamic_mw += c.dynamic_power_mw() * duty;
    }
}

} // namespace

PowerBreakdown system_power(const CoreAllocation &alloc, double rate, double input_bits,
        const CoreCost &per_core, const CostConstants &consts, double routing_joules_per_pattern)
{
    if (rate < 0.0) {
        throw ConfigError("negative pattern rate");
    }
    PowerBreakdown p;
    const double instance_rate = rate / static_cast<double>(alloc.replication);
    for (const auto &core : alloc.cores) {
        if (rate > 0.0 && !(core.busy_time > 0.0)) {
            throw ConfigError("core " + std::to_string(core.id) + " has no busy time");
        }
        const bool idle_off = consts.nonvolatile_idle_off && is_memristor(core.kind);
        add_core(p, per_core, instance_rate * core.busy_time, idle_off);
    }
    const auto reps = static_cast<double>(alloc.replication);
    p.leakage_mw *= reps;
    p.dynamic_mw *= reps;
    p.routing_mw = routing_joules_per_pattern * rate * 1e3;
    p.tsv_mw = tsv_io_power_mw(input_bits, rate, consts.tsv_pj_per_bit);
    return p;
}

PowerBreakdown count_power(double count, CoreType t, double rate, double input_bits,
        const CostConstants &consts)
{
    const CoreCost c = reference_core_cost(t);
    PowerBreakdown p;
    if (t == CoreType::risc) {
        p.leakage_mw = risc_power_mw(count);
        return p;
    }
    PowerBreakdown one;
    add_core(one, c, rate * c.processing_time_s, consts.nonvolatile_idle_off && t == CoreType::itim);
    p.leakage_mw = one.leakage_mw * count;
    p.dynamic_mw = one.dynamic_mw * count;
    p.max_duty = one.max_duty;
    p.saturated = one.saturated;
    p.tsv_mw = tsv_io_power_mw(input_bits, rate, consts.tsv_pj_per_bit);
    return p;
}

double risc_power_mw(double count)
{
    return count * reference_core_cost(CoreType::risc).total_power_mw;
}

long long risc_core_count(const RiscWorkload &w, double rate)
{
    return std::max(1LL, ceil_count(rate * risc_time_per_pattern(w)));
}

double efficiency_vs_risc(double risc_mw, double arch_mw)
{
    if (!(arch_mw > 0.0)) {
        throw ConfigError("efficiency against a zero-power architecture");
    }
    return risc_mw / arch_mw;
}

namespace {

CoreCost cost_for(CoreType arch, const EstimatorOptions &opt)
{
    if (arch == CoreType::digital && opt.digital_cost) {
        return *opt.digital_cost;
    }
    if (arch == CoreType::itim && opt.itim_cost) {
        return *opt.itim_cost;
    }
    return reference_core_cost(arch);
}

} // namespace

ArchReport map_and_cost(const AppCatalogEntry &entry, CoreType arch, const EstimatorOptions &opt)
{
    ArchReport r;
    r.arch = arch;
    if (arch == CoreType::risc) {
        r.cores = static_cast<double>(risc_core_count(entry.risc, entry.pattern_rate));
        r.instance_cores = static_cast<std::size_t>(r.cores);
        r.interval_s = risc_time_per_pattern(entry.risc);
        r.area_mm2 = system_area(r.cores, arch);
        r.power.leakage_mw = risc_power_mw(r.cores);
        return r;
    }
    const MapperTarget target = arch == CoreType::digital ? MapperTarget::digital_target(opt.digital)
                                                          : MapperTarget::itim_target(opt.memristor);
    CoreAllocation alloc = pack_cores(entry.networks_for(arch), target, entry.name);
    const RoutedAllocation routed = route_allocation(alloc, opt.constants.hop_energy_pj, opt.placement);
    alloc = replicate_for_rate(std::move(alloc), entry.pattern_rate);
    const double joules = routing_energy(routed.table, 1.0, routed.mesh);
    const CoreCost cost = cost_for(arch, opt);
    r.cores = static_cast<double>(alloc.total_cores());
    r.instance_cores = alloc.instance_cores();
    r.replication = alloc.replication;
    r.interval_s = alloc.interval;
    r.routing_latency_s = alloc.routing_latency;
    r.area_mm2 = system_area(r.cores, cost);
    r.power = system_power(alloc, entry.pattern_rate, entry.input_bits_per_pattern, cost,
            opt.constants, joules);
    return r;
}

AppReport estimate_app(const AppCatalogEntry &entry, const EstimatorOptions &opt)
{
    AppReport rep;
    rep.app = entry.id;
    rep.rate = entry.pattern_rate;
    rep.input_bits = entry.input_bits_per_pattern;
    for (const CoreType arch : all_archs) {
        rep.mapped.push_back(map_and_cost(entry, arch, opt));

        ArchReport p;
        p.arch = arch;
        p.cores = published_row(entry.id, arch).cores;
        p.instance_cores = static_cast<std::size_t>(p.cores);
        p.area_mm2 = system_area(p.cores, arch);
        p.power = count_power(p.cores, arch, entry.pattern_rate, entry.input_bits_per_pattern,
                opt.constants);
        rep.published_count.push_back(p);
    }
    for (auto *set : {&rep.mapped, &rep.published_count}) {
        const double risc = set->front().power.total_mw();
        for (auto &a : *set) {
            a.efficiency = efficiency_vs_risc(risc, a.power.total_mw());
        }
    }
    return rep;
}

namespace {

CoreSize reference_size(CoreType t)
{
    if (t == CoreType::digital) {
        const DigitalCoreConfig d;
        return {d.max_inputs, d.max_neurons};
    }
    const MemristorCoreConfig m;
    return {m.max_inputs, m.max_neurons};
}

} // namespace

CoreCost scaled_core_cost(CoreType t, std::size_t rows, std::size_t cols, const CostScaling &s)
{
    if (t == CoreType::risc) {
        throw ConfigError("the size sweep covers neural cores only");
    }
    for (const double p : {s.area_periphery, s.power_periphery}) {
        if (p < 0.0 || p > 1.0) {
            throw ConfigError("periphery fraction outside [0, 1]");
        }
    }
    const CoreSize ref = reference_size(t);
    const double cells = static_cast<double>(rows * cols) / static_cast<double>(ref.rows * ref.cols);
    const double fa = s.area_periphery + (1.0 - s.area_periphery) * cells;
    const double fp = s.power_periphery + (1.0 - s.power_periphery) * cells;
    CoreCost c = reference_core_cost(t);
    c.area_mm2 *= fa;
    c.total_power_mw *= fp;
    c.leakage_power_mw *= fp;
    return c;
}

std::vector<CoreSize> default_sweep_sizes(CoreType t)
{
    std::vector<CoreSize> out;
    std::size_t rows = t == CoreType::digital ? 64 : 32;
    for (int i = 0; i < 5; ++i, rows *= 2) {
        out.push_back({rows, rows / 2});
    }
    return out;
}

std::vector<SweepRow> design_space_sweep(const std::vector<AppId> &apps,
        const std::vector<CoreSize> &sizes, CoreType arch, const EstimatorOptions &opt,
        const CostScaling &scaling, const FrameGeometry &frame)
{
    if (arch == CoreType::risc) {
        throw ConfigError("the size sweep covers neural cores only");
    }
    const CoreSize ref = reference_size(arch);
    std::vector<SweepRow> rows;
    for (const AppId app : apps) {
        const AppCatalogEntry entry = catalog_entry(app, frame);
        const std::size_t first = rows.size();
        for (const CoreSize &size : sizes) {
            EstimatorOptions o = opt;
            o.digital.max_inputs = size.rows;
            o.digital.max_neurons = size.cols;
            o.memristor.max_inputs = size.rows;
            o.memristor.max_neurons = size.cols;
            const CoreCost cost = scaled_core_cost(arch, size.rows, size.cols, scaling);
            (arch == CoreType::digital ? o.digital_cost : o.itim_cost) = cost;
            const ArchReport r = map_and_cost(entry, arch, o);
            rows.push_back({entry.name, size, r.cores, r.area_mm2, r.power.total_mw(), 0.0, 0.0});
        }
        // Normalized to the reference size when swept, else to the first size.
        std::size_t base = first;
        for (std::size_t i = first; i < rows.size(); ++i) {
            if (rows[i].size.rows == ref.rows && rows[i].size.cols == ref.cols) {
                base = i;
            }
        }
        for (std::size_t i = first; i < rows.size(); ++i) {
            rows[i].area_norm = rows[i].area_mm2 / rows[base].area_mm2;
            rows[i].power_norm = rows[i].power_mw / rows[base].power_mw;
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows)
{
    std::ostringstream out;
    out << "app,rows,cols,cores,area_mm2,power_mw,area_norm,power_norm\n";
    char buf[256];
    for (const auto &r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.0f,%.9g,%.9g,%.9g,%.9g\n", r.app.c_str(),
                r.size.rows, r.size.cols, r.cores, r.area_mm2, r.power_mw, r.area_norm,
                r.power_norm);
        out << buf;
    }
    return out.str();
}

} // namespace xbarsim
