#include <benchmark/benchmark.h>

#include "xbarsim/crossbar.hpp"
#include "xbarsim/mapper.hpp"
#include "xbarsim/nn_model.hpp"
#include "xbarsim/noc.hpp"

using namespace xbarsim;

namespace {

CrossbarInstance random_instance(std::size_t inputs, std::size_t cols, double wire_r)
{
    Rng rng(1);
    Matrix w(inputs + 1, cols);
    for (auto &v : w.data) {
        v = rng.uniform(-1.0, 1.0);
    }
    return make_crossbar(w, true, {}, wire_r).first;
}

void BM_DotProduct(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> w(n, 0.5), x(n, 0.25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dot_product(w, x));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DotProduct)->Arg(784)->Arg(3072);

void BM_CrossbarFactorize(benchmark::State &state)
{
    const auto xb = random_instance(static_cast<std::size_t>(state.range(0)) - 1,
            static_cast<std::size_t>(state.range(1)), 1.0);
    for (auto _ : state) {
        CrossbarSolver solver(xb);
        benchmark::DoNotOptimize(solver.unknowns());
    }
}
BENCHMARK(BM_CrossbarFactorize)->Args({32, 16})->Args({128, 64})->Unit(benchmark::kMillisecond);

void BM_CrossbarSolve(benchmark::State &state)
{
    const auto xb = random_instance(127, 64, state.range(0) == 0 ? 0.0 : 1.0);
    const CrossbarSolver solver(xb);
    std::vector<double> in(127, 0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.solve(in));
    }
}
BENCHMARK(BM_CrossbarSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_PackDeep(benchmark::State &state)
{
    const std::vector<AppNetwork> nets{{make_network({784, 200, 100, 10}, Threshold{}, Threshold{}), 1, 0}};
    for (auto _ : state) {
        auto alloc = pack_cores(nets, MapperTarget::itim_target());
        benchmark::DoNotOptimize(alloc.cores.size());
    }
}
BENCHMARK(BM_PackDeep)->Unit(benchmark::kMillisecond);

void BM_RouteDeep(benchmark::State &state)
{
    const std::vector<AppNetwork> nets{{make_network({784, 200, 100, 10}, Threshold{}, Threshold{}), 1, 0}};
    const auto base = pack_cores(nets, MapperTarget::itim_target());
    for (auto _ : state) {
        auto alloc = base;
        auto routed = route_allocation(alloc, default_hop_energy_pj);
        benchmark::DoNotOptimize(routed.table.latency_cycles);
    }
}
BENCHMARK(BM_RouteDeep)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
