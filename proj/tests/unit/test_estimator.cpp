#include "doctest.h"

#include <algorithm>

#include "xbarsim/estimator.hpp"

using namespace xbarsim;

namespace {

// Per-core figures: area mm2, total mW, leakage mW, seconds per pattern.
constexpr double risc_mw = 87.0, risc_area = 0.524;
constexpr double dig_total = 24.2, dig_leak = 6.94, dig_time = 1.28e-6;
constexpr double itim_total = 0.0888, itim_leak = 0.0118, itim_time = 9e-8;

double count_oracle(double n, double total, double leak, double time, double rate, double bits)
{
    const double duty = std::min(1.0, rate * time);
    return n * (leak + (total - leak) * duty) + bits * rate * 0.05e-12 * 1e3;
}

CoreAllocation two_core_alloc(double busy0, double busy1, std::size_t replication)
{
    CoreAllocation a;
    a.target = MapperTarget::itim_target();
    a.cores.resize(2);
    a.cores[0].kind = CoreKind::memristor_dac;
    a.cores[0].busy_time = busy0;
    a.cores[1].id = 1;
    a.cores[1].kind = CoreKind::memristor_plain;
    a.cores[1].busy_time = busy1;
    a.replication = replication;
    return a;
}

} // namespace

TEST_CASE("area and RISC power are linear in the core count")
{
    CHECK(system_area(902, CoreType::risc) == doctest::Approx(902 * risc_area));
    CHECK(std::abs(system_area(902, CoreType::risc) - 472.65) <= 0.01);
    CHECK(risc_power_mw(902) == doctest::Approx(78474.0));
    CHECK_THROWS_AS(system_area(-1, CoreType::itim), ConfigError);
}

TEST_CASE("TSV power")
{
    CHECK(tsv_io_power_mw(784 * 8, 1e5) == doctest::Approx(0.03136));
    CHECK(tsv_io_power_mw(1, 1, 1.0) == doctest::Approx(1e-9));
}

TEST_CASE("count power matches the hand formula")
{
    const CostConstants c;
    const double bits = 784 * 8;
    const auto d = count_power(9, CoreType::digital, 1e5, bits, c);
    CHECK(d.total_mw() == doctest::Approx(count_oracle(9, dig_total, dig_leak, dig_time, 1e5, bits)));
    CHECK(std::abs(d.total_mw() - 82.40) / 82.40 <= 0.05);
    const auto m = count_power(31, CoreType::itim, 1e5, bits, c);
    CHECK(m.total_mw() == doctest::Approx(count_oracle(31, itim_total, itim_leak, itim_time, 1e5, bits)));
    CHECK(std::abs(m.total_mw() - 0.42) / 0.42 <= 0.20);
    // Saturated duty.
    const auto s = count_power(2, CoreType::digital, 1e7, 0, c);
    CHECK(s.saturated);
    CHECK(s.total_mw() == doctest::Approx(2 * dig_total));
    CHECK(count_power(5, CoreType::risc, 1e5, bits, c).total_mw() == doctest::Approx(5 * risc_mw));
    CostConstants off;
    off.nonvolatile_idle_off = true;
    CHECK(count_power(1, CoreType::itim, 1e6, 0, off).total_mw() == doctest::Approx(itim_total * 0.09));
}

TEST_CASE("system power of a hand-built allocation")
{
    const CoreCost cost{0.0082, itim_total, itim_leak, itim_time};
    const auto a = two_core_alloc(1e-7, 3e-7, 2);
    const double rate = 4e6; // 2e6 per instance: duties 0.2 and 0.6
    const auto p = system_power(a, rate, 100, cost, CostConstants{}, 2e-12);
    CHECK(p.leakage_mw == doctest::Approx(2 * 2 * itim_leak));
    CHECK(p.dynamic_mw == doctest::Approx(2 * (itim_total - itim_leak) * (0.2 + 0.6)));
    CHECK(p.routing_mw == doctest::Approx(2e-12 * rate * 1e3));
    CHECK(p.tsv_mw == doctest::Approx(100 * rate * 0.05e-9));
    CHECK(p.max_duty == doctest::Approx(0.6));
    CHECK_FALSE(p.saturated);
    CHECK(system_power(a, 2e7, 0, cost, {}, 0).saturated);
    CHECK_THROWS_AS(system_power(a, -1, 0, cost, {}, 0), ConfigError);
    CHECK_THROWS_AS(system_power(two_core_alloc(0, 1e-7, 1), 1, 0, cost, {}, 0), ConfigError);
}

TEST_CASE("efficiency")
{
    CHECK(efficiency_vs_risc(100, 4) == 25);
    CHECK_THROWS_AS(efficiency_vs_risc(100, 0), ConfigError);
}

TEST_CASE("deep network estimate")
{
    const auto rep = estimate_app(catalog_entry(AppId::deep));
    REQUIRE(rep.mapped.size() == 3);
    const auto &risc = rep.mapped[0];
    CHECK(std::abs(risc.cores - 902) / 902 <= 0.02);
    CHECK(risc.efficiency == 1.0);
    for (const auto &r : rep.mapped) {
        CHECK(r.area_mm2 == doctest::Approx(system_area(r.cores, r.arch)));
        CHECK(r.efficiency == doctest::Approx(risc.power.total_mw() / r.power.total_mw()));
    }
    CHECK(rep.mapped[1].efficiency > 1.0);
    CHECK(rep.mapped[2].efficiency > rep.mapped[1].efficiency);
    CHECK(rep.published_count[1].cores == 9);
    CHECK(rep.published_count[0].power.total_mw() == doctest::Approx(78474.0));
}

TEST_CASE("property: scaled core cost")
{
    const CostScaling s;
    const auto ref = scaled_core_cost(CoreType::itim, 128, 64, s);
    CHECK(ref.area_mm2 == doctest::Approx(0.0082));
    CHECK(ref.total_power_mw == doctest::Approx(itim_total));
    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
        const std::size_t r = 2 + rng.below(600), c = 1 + rng.below(300);
        const double p = rng.uniform(0.0, 1.0);
        const auto cost = scaled_core_cost(CoreType::digital, r, c, {p, p});
        const double f = p + (1 - p) * static_cast<double>(r * c) / (256.0 * 128.0);
        CHECK(cost.area_mm2 == doctest::Approx(0.208 * f));
        CHECK(cost.leakage_power_mw == doctest::Approx(dig_leak * f));
        CHECK(cost.processing_time_s == dig_time);
    }
    CHECK_THROWS_AS(scaled_core_cost(CoreType::risc, 1, 1, s), ConfigError);
    CHECK_THROWS_AS(scaled_core_cost(CoreType::itim, 1, 1, {1.5, 0.3}), ConfigError);
}

TEST_CASE("sweep normalizes to the reference size")
{
    const auto sizes = default_sweep_sizes(CoreType::itim);
    REQUIRE(sizes.size() == 5);
    CHECK(sizes[0].rows == 32);
    CHECK(sizes[4].rows == 512);
    CHECK(default_sweep_sizes(CoreType::digital)[2].rows == 256);
    const auto rows = design_space_sweep({AppId::motion}, sizes, CoreType::itim, {}, {},
            {160, 160, 60});
    REQUIRE(rows.size() == 5);
    CHECK(rows[2].area_norm == 1.0);
    CHECK(rows[2].power_norm == 1.0);
    const auto no_ref = design_space_sweep({AppId::motion}, {{64, 32}, {256, 128}}, CoreType::itim, {},
            {}, {160, 160, 60});
    CHECK(no_ref[0].area_norm == 1.0);
    const auto csv = sweep_csv(rows);
    CHECK(csv.rfind("app,rows,cols,cores,area_mm2,power_mw,area_norm,power_norm\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK_THROWS_AS(design_space_sweep({AppId::deep}, sizes, CoreType::risc, {}, {}), ConfigError);
}
