// Reference (serial) against parallel execution of the batch kernels.
// Argument 0 is Execution::reference, 1 is Execution::parallel.

#include "expcurve/markovlab.hpp"
#include "expcurve/siciak.hpp"
#include "expcurve/valency.hpp"

#include <benchmark/benchmark.h>

using namespace expcurve;

namespace {

Execution mode_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::reference : Execution::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "reference" : "parallel"); }

void BM_SolveBatch(benchmark::State& state) {
    const auto grid = EvaluationGrid::chebyshev_interval(0, 1, 257);
    const auto basis = ConditionedBasis::create(exponential_curve(0, 1), 4, grid.nodes());
    const SupNormSolver solver(basis->constraint_rows(grid.nodes()));
    const auto objectives = basis->derivative_rows(grid.real_nodes());
    for (auto _ : state) benchmark::DoNotOptimize(solve_batch(solver, objectives, mode_of(state)));
    label(state);
}

void BM_MarkovFactor(benchmark::State& state) {
    GridControls controls;
    controls.mode = mode_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(markov_factor(exponential_curve(0, 1), 4, controls));
    label(state);
}

void BM_SiciakSweep(benchmark::State& state) {
    const auto K = EvaluationGrid::chebyshev_interval(0, 1, 129);
    const std::vector<std::complex<double>> probes{-1.0, 2.0, {0.5, 1.0}};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            boundedness_sweep(K, probes, 1, 4, exponential_curve(0, 1), PhiFunction::n_squared(), mode_of(state)));
    label(state);
}

void BM_Valency(benchmark::State& state) {
    ExpPoly f(exponential_curve(0, 1), 1);
    f.set_coeff(0, 1, 1.0);
    const auto F = EntireFunction::of(f);
    for (auto _ : state) benchmark::DoNotOptimize(valency(F, Contour{0.0, 7.0, 256}, 16, 42, mode_of(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_SolveBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MarkovFactor)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SiciakSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Valency)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
