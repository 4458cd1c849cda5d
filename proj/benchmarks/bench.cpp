#include "maxmargin/certify.hpp"
#include "maxmargin/constructions.hpp"
#include "maxmargin/spectra.hpp"
#include "maxmargin/trainer.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace maxmargin;

static void BM_ForwardAllCyclic(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const auto net = build_cyclic(p);
    const auto data = build_dataset(net.task);
    for (auto _ : state) benchmark::DoNotOptimize(forward_all(net, data));
    state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_ForwardAllCyclic)->Arg(13)->Arg(31)->Arg(71);

static void BM_DatasetMarginS5(benchmark::State& state) {
    const Group g = make_group({GroupKind::symmetric, 5});
    const auto net = build_group_trace(g, irreps(g));
    const auto data = build_dataset(net.task);
    for (auto _ : state) benchmark::DoNotOptimize(dataset_margin(net, data));
}
BENCHMARK(BM_DatasetMarginS5)->Unit(benchmark::kMillisecond);

static void BM_Dft(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    std::vector<double> u(state.range(0));
    for (double& x : u) x = nd(rng);
    for (auto _ : state) benchmark::DoNotOptimize(dft(u));
}
BENCHMARK(BM_Dft)->Arg(13)->Arg(71)->Arg(257);

static void BM_Irreps(benchmark::State& state) {
    const Group g = make_group({GroupKind::symmetric, static_cast<int>(state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(irreps(g));
}
BENCHMARK(BM_Irreps)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_LossAndGrad(benchmark::State& state) {
    TrainConfig c = preset("cyclic13");
    const auto net = init_network(c);
    const auto data = build_dataset(c.task);
    for (auto _ : state) benchmark::DoNotOptimize(loss_and_grad(net, data, c.reg_lambda, c.resolved_reg_exp()));
}
BENCHMARK(BM_LossAndGrad)->Unit(benchmark::kMicrosecond);

static void BM_Oracle(benchmark::State& state) {
    const auto data = build_dataset(TaskSpec::modular(7));
    OracleOptions opts;
    opts.restarts = 4;
    opts.steps = 500;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            single_neuron_oracle(data, Activation::square(), ClassWeighting::uniform(data), {}, opts));
}
BENCHMARK(BM_Oracle)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
