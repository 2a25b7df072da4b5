// Serial reference vs OpenMP kernel. Arg 0 is the serial path, any other arg
// is the OpenMP thread count.

#include <benchmark/benchmark.h>

#include "popcov/estimators.hpp"
#include "popcov/pairing.hpp"
#include "popcov/rootsplit.hpp"
#include "popcov/treesim.hpp"

using namespace popcov;

namespace {

const TreeModel& tree() {
    static const TreeModel t = [] {
        ScenarioParams p;
        p.m = 20;
        return scenario_tree(p);
    }();
    return t;
}

const FreqPanel& panel() {
    static const FreqPanel p = [] {
        SimulationOptions o;
        o.n_snps = 200000;
        return simulate_panel(tree(), o);
    }();
    return p;
}

ParallelOptions threads(int n) {
    ParallelOptions o;
    o.threads = n;
    return o;
}

void BM_moment_matrix(benchmark::State& state) {
    const int t = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(t == 0 ? moment_matrix_serial(panel()) : moment_matrix(panel(), threads(t)));
    state.SetItemsProcessed(state.iterations() * panel().n_snps());
}

void BM_s_hat(benchmark::State& state) {
    static const auto pairing = pair_snps(panel()).pairing;
    const int t = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(t == 0 ? s_hat_serial(panel(), pairing) : s_hat(panel(), pairing, threads(t)));
    state.SetItemsProcessed(state.iterations() * pairing.size());
}

void BM_root_split(benchmark::State& state) {
    static const auto v = v_hat(panel());
    const int t = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(t == 0 ? find_root_split_serial(v)
                                        : find_root_split(v, SplitMode::Exhaustive, threads(t)));
}

void BM_simulate(benchmark::State& state) {
    const int t = static_cast<int>(state.range(0));
    SimulationOptions o;
    o.n_snps = 50000;
    o.parallel = threads(t);
    for (auto _ : state)
        benchmark::DoNotOptimize(t == 0 ? simulate_panel_serial(tree(), o) : simulate_panel(tree(), o));
    state.SetItemsProcessed(state.iterations() * o.n_snps);
}

}  // namespace

BENCHMARK(BM_moment_matrix)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_s_hat)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_root_split)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
