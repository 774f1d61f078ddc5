// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "shlin/oracle.hpp"

using namespace shlin;

namespace {

TrialConfig config(std::size_t trials) {
    TrialConfig cfg;
    cfg.seed = 42;
    cfg.trials = trials;
    return cfg;
}

// Arg 0 selects the serial reference runner; any other value is the OpenMP thread count (0 keeps the runtime default).
void run(benchmark::State& state, const TrialConfig& cfg, const TrialFn& fn) {
    const int jobs = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto outcomes = jobs < 0 ? run_trials_serial(cfg, fn) : run_trials_parallel(cfg, fn, jobs);
        benchmark::DoNotOptimize(outcomes.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.trials));
}

void BM_Correctness(benchmark::State& state) {
    auto cfg = config(2000);
    run(state, cfg, correctness_trial(cfg, static_cast<DomainTag>(state.range(1))));
}

void BM_Optimality(benchmark::State& state) {
    auto cfg = config(200);
    run(state, cfg, optimality_trial(cfg, static_cast<DomainTag>(state.range(1))));
}

void BM_Equivalence(benchmark::State& state) {
    auto cfg = config(1000);
    run(state, cfg, equivalence_trial(cfg));
}

void runners(benchmark::internal::Benchmark* b) {
    for (int d = 0; d < 3; ++d) {
        b->Args({-1, d});
        b->Args({0, d});
    }
}

} // namespace

BENCHMARK(BM_Correctness)->Apply(runners)->ArgNames({"jobs", "domain"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Optimality)->Apply(runners)->ArgNames({"jobs", "domain"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Equivalence)->Arg(-1)->Arg(0)->ArgName("jobs")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
