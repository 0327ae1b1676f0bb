// OpenMP kernels against the serial reference, plus one full flow step.

#include "rgs/grid.hpp"
#include "rgs/kernels.hpp"
#include "rgs/minimize.hpp"
#include "rgs/potentials.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace rgs;

ComplexField bump(std::size_t n)
{
    return ComplexField::sample(GridSpec(8.0, n), [](Point x) {
        return std::exp(-0.5 * dot(x, x)) * std::polar(1.0, 0.4 * x.x1);
    });
}

template <bool Omp>
void laplacian(benchmark::State& state)
{
    const ComplexField f = bump(static_cast<std::size_t>(state.range(0)));
    const auto g = kernels::Layout::of(f.grid());
    std::vector<cplx> out(f.grid().size());
    for (auto _ : state) {
        if constexpr (Omp) {
            kernels::laplacian(g, f.values(), out);
        } else {
            kernels::serial::laplacian(g, f.values(), out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.grid().size()));
}

template <bool Omp>
void dirichlet_form(benchmark::State& state)
{
    const ComplexField f = bump(static_cast<std::size_t>(state.range(0)));
    const auto g = kernels::Layout::of(f.grid());
    for (auto _ : state) {
        benchmark::DoNotOptimize(Omp ? kernels::dirichlet_form(g, f.values())
                                     : kernels::serial::dirichlet_form(g, f.values()));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.grid().size()));
}

template <bool Omp>
void power_integral(benchmark::State& state)
{
    const ComplexField f = bump(static_cast<std::size_t>(state.range(0)));
    const auto g = kernels::Layout::of(f.grid());
    for (auto _ : state) {
        benchmark::DoNotOptimize(Omp ? kernels::power_integral(g, f.values(), 3.0)
                                     : kernels::serial::power_integral(g, f.values(), 3.0));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.grid().size()));
}

template <bool Omp>
void angular(benchmark::State& state)
{
    const ComplexField f = bump(static_cast<std::size_t>(state.range(0)));
    const auto g = kernels::Layout::of(f.grid());
    std::vector<cplx> out(f.grid().size());
    for (auto _ : state) {
        if constexpr (Omp) {
            kernels::angular(g, f.values(), out);
        } else {
            kernels::serial::angular(g, f.values(), out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.grid().size()));
}

void flow_step_bench(benchmark::State& state)
{
    const ComplexField u = normalize(bump(static_cast<std::size_t>(state.range(0))));
    const RealField V = sample_potential(PotentialSpec::harmonic(1.0), u.grid());
    const Physics phys{5.0, 2.0, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow_step(u, V, phys, 0.05));
    }
}

} // namespace

BENCHMARK(laplacian<true>)->Name("laplacian/omp")->Arg(256)->Arg(512)->Arg(1024);
BENCHMARK(laplacian<false>)->Name("laplacian/serial")->Arg(256)->Arg(512)->Arg(1024);
BENCHMARK(angular<true>)->Name("angular/omp")->Arg(256)->Arg(1024);
BENCHMARK(angular<false>)->Name("angular/serial")->Arg(256)->Arg(1024);
BENCHMARK(dirichlet_form<true>)->Name("dirichlet_form/omp")->Arg(256)->Arg(1024);
BENCHMARK(dirichlet_form<false>)->Name("dirichlet_form/serial")->Arg(256)->Arg(1024);
BENCHMARK(power_integral<true>)->Name("power_integral/omp")->Arg(256)->Arg(1024);
BENCHMARK(power_integral<false>)->Name("power_integral/serial")->Arg(256)->Arg(1024);
BENCHMARK(flow_step_bench)->Name("flow_step/omp")->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
