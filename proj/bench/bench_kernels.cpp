// Serial reference vs OpenMP kernels. Arg(0) = serial, Arg(1) = parallel.

#include <benchmark/benchmark.h>

#include "wdep/bounds.hpp"
#include "wdep/coupling.hpp"
#include "wdep/depcheck.hpp"
#include "wdep/limits.hpp"
#include "wdep/processes.hpp"

using namespace wdep;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

const ARModel kAr1({0.5}, InnovationDist::rademacher());

void BM_LarchPath(benchmark::State& state) {
    const auto model = LarchModel::power_law(1.0, 0.2, 2.5, 200, InnovationDist::uniform(-1.0, 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(model, 20000, std::nullopt, 1, exec_of(state)));
    label(state);
}

void BM_TauCurve(benchmark::State& state) {
    const ARModel ar2({0.5, 0.25}, InnovationDist::gaussian(1.0));
    std::vector<std::size_t> lags;
    for (std::size_t r = 1; r <= 30; ++r) lags.push_back(r);
    CouplingOptions opt;
    opt.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(tau_curve(ar2, lags, 10000, 2, opt));
    label(state);
}

void BM_Audit(benchmark::State& state) {
    const auto bank = make_bank(default_arity_pairs(), 16, 3);
    const std::vector<std::size_t> lags{1, 2, 5, 10};
    AuditOptions opt;
    opt.sampling.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(audit(kAr1, WeakDepKind::theta, lags, bank, 5000, 3, opt));
    label(state);
}

void BM_Donsker(benchmark::State& state) {
    const std::vector<double> grid{0.0, 0.5, 1.0};
    DonskerOptions opt;
    opt.sigma2 = 4.0;
    opt.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(donsker_check(kAr1, 1000, grid, 2000, 4, opt));
    label(state);
}

void BM_TailCheck(benchmark::State& state) {
    const std::vector<double> grid{0, 10, 20, 40};
    TailCheckOptions opt;
    opt.exec = exec_of(state);
    const auto params = ar1_bound_params(kAr1);
    for (auto _ : state) benchmark::DoNotOptimize(tail_check(model_sum_sampler(kAr1, 100), params, grid, 50000, 5, opt));
    label(state);
}

}  // namespace

BENCHMARK(BM_LarchPath)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TauCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Audit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Donsker)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TailCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
