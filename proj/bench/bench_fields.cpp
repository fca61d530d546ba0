// Serial reference vs OpenMP batch kernels for field evaluation and density
// reconstruction.
#include <vector>

#include <benchmark/benchmark.h>

#include "ltp/fields.hpp"
#include "ltp/ltp_core.hpp"
#include "ltp/particle_state.hpp"
#include "ltp/potentials.hpp"

namespace {

ltp::ParticleState make_state(double h) {
    return ltp::init_particles(ltp::InitialDensity::rho2(), h, ltp::WeightMode::CellAverage,
                               ltp::ShapeFunction(ltp::ShapeFamily::B3));
}

ltp::Potential make_potential(int which) {
    return which == 0 ? ltp::Potential::quadratic(1) : ltp::Potential::power_rep_attr(3.0, 1.5, 1);
}

template <bool Parallel>
void BM_Fields(benchmark::State& bench) {
    const ltp::ParticleState state = make_state(1.0 / static_cast<double>(bench.range(0)));
    const ltp::FieldEvaluator eval(ltp::SourceCloud::from_state(state), make_potential(static_cast<int>(bench.range(1))),
                                   ltp::QuadratureRule{});
    std::vector<double> grad(state.size()), hess(state.size());
    for (auto _ : bench) {
        if constexpr (Parallel) ltp::evaluate_fields_parallel(eval, state.positions, grad, hess);
        else ltp::evaluate_fields_serial(eval, state.positions, grad, hess);
        benchmark::DoNotOptimize(grad.data());
    }
    bench.SetItemsProcessed(bench.iterations() * static_cast<long>(state.size()));
}

template <bool Parallel>
void BM_Density(benchmark::State& bench) {
    const ltp::ParticleState state = make_state(1.0 / static_cast<double>(bench.range(0)));
    std::vector<double> xs(4096);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = -1.1 + 2.2 * static_cast<double>(i) / 4095.0;
    for (auto _ : bench) {
        auto rho = Parallel ? ltp::reconstruct_density_parallel(state, xs) : ltp::reconstruct_density_serial(state, xs);
        benchmark::DoNotOptimize(rho.data());
    }
}

}  // namespace

// Args: {1/h, potential (0 quadratic, 1 repulsive-attractive)}.
BENCHMARK(BM_Fields<false>)->Args({50, 0})->Args({100, 0})->Args({50, 1})->Args({100, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fields<true>)->Args({50, 0})->Args({100, 0})->Args({50, 1})->Args({100, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Density<false>)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Density<true>)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
