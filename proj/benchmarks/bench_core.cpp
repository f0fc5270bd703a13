#include <benchmark/benchmark.h>

#include "ratmix/indexsets.hpp"
#include "ratmix/markov.hpp"
#include "ratmix/renewal.hpp"
#include "ratmix/weights.hpp"

using namespace ratmix;

static void BM_RenewalRecursion(benchmark::State& state) {
    const i64 len = state.range(0);
    const auto f = renewal::LifetimeDist::st_petersburg();

    for (auto _ : state) {
        auto u = renewal::renewal_sequence(f, len);
        benchmark::DoNotOptimize(u.data());
        benchmark::ClobberMemory();
    }

    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * len);
}

static void BM_ReflectingEvolution(benchmark::State& state) {
    const i64 N = state.range(0);
    const auto c = markov::Chain::reflecting();

    for (auto _ : state) {
        auto tr = markov::evolve_track(c, 1, {1}, N);
        benchmark::DoNotOptimize(tr.track.data());
        benchmark::ClobberMemory();
    }

    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * N);
}

static void BM_WeightedMassBlocks(benchmark::State& state) {
    const i64 N = state.range(0);
    const auto K = sets::IndexSet::blocks();
    const auto u = weights::family("power", {-0.5});

    for (auto _ : state) {
        auto mass = sets::weighted_mass(u, K, N);
        benchmark::DoNotOptimize(mass);
    }

    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * N);
}

static void BM_ExactRenewalRecursion(benchmark::State& state) {
    const i64 len = state.range(0);
    const auto f = renewal::LifetimeDist::geometric(Rat(1, 2));

    for (auto _ : state) {
        auto u = renewal::renewal_sequence_exact(f, len);
        benchmark::DoNotOptimize(u.data());
        benchmark::ClobberMemory();
    }

    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * len);
}

BENCHMARK(BM_RenewalRecursion)->Arg(1 << 10)->Arg(1 << 14);

BENCHMARK(BM_ReflectingEvolution)->Arg(1 << 10)->Arg(1 << 12);

BENCHMARK(BM_WeightedMassBlocks)->Arg(1 << 14)->Arg(1 << 20);

BENCHMARK(BM_ExactRenewalRecursion)->Arg(1 << 8)->Arg(1 << 10);

BENCHMARK_MAIN();
