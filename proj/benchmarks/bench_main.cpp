#include <benchmark/benchmark.h>

#include <vector>

#include "esboot/bootstrap.hpp"
#include "esboot/es_estimation.hpp"
#include "esboot/experiments.hpp"
#include "esboot/qmle.hpp"
#include "esboot/volatility.hpp"

using namespace esboot;

namespace {

std::vector<double> sample_path(std::size_t n) {
    auto rng = RngStream::derive(7, StreamTag::Simulation, 0);
    return Garch11{}
        .simulate(study_theta0(Persistence::High), InnovationDist::student_t(6), n, 1000, rng)
        .returns;
}

void BM_FilterVariance(benchmark::State& state) {
    const auto x = sample_path(state.range(0));
    const auto th = study_theta0(Persistence::High);
    std::vector<double> out(x.size() + 1);
    for (auto _ : state) {
        Garch11{}.filter_variance(th, x, InitScheme::presample(), out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterVariance)->Arg(500)->Arg(5000);

// sigma^2 plus the gradient recursion
void BM_FilterWithDerivatives(benchmark::State& state) {
    const auto x = sample_path(state.range(0));
    const auto th = study_theta0(Persistence::High);
    for (auto _ : state) benchmark::DoNotOptimize(Garch11{}.filter(th, x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterWithDerivatives)->Arg(500)->Arg(5000);

void BM_Criterion(benchmark::State& state) {
    const auto x = sample_path(state.range(0));
    const auto th = study_theta0(Persistence::High);
    for (auto _ : state) benchmark::DoNotOptimize(criterion(th, x));
}
BENCHMARK(BM_Criterion)->Arg(500)->Arg(5000);

void BM_Fit(benchmark::State& state) {
    const auto x = sample_path(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fit(x));
}
BENCHMARK(BM_Fit)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_GammaHat(benchmark::State& state) {
    const auto f = fit(sample_path(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gamma_hat(f, 0.05));
}
BENCHMARK(BM_GammaHat)->Arg(500)->Arg(5000)->Unit(benchmark::kMicrosecond);

void BM_BootstrapReplicate(benchmark::State& state) {
    auto x = sample_path(state.range(0));
    auto f = fit(x);
    const auto ctx = BootstrapContext::make(std::move(x), std::move(f), 0.05);
    std::uint64_t b = 0;
    for (auto _ : state) {
        auto rng = RngStream::derive(11, StreamTag::Bootstrap, b++);
        benchmark::DoNotOptimize(bootstrap_replicate(ctx, rng));
    }
}
BENCHMARK(BM_BootstrapReplicate)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
    const auto sc = make_scenario(Persistence::High, InnovationDist::student_t(6), 0.05, 500, 0.10, 500, 1, 3);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_trajectory(sc, i++));
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMillisecond)->Iterations(5);

}  // namespace
BENCHMARK_MAIN();
