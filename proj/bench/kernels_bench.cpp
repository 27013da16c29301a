// Serial reference vs OpenMP paths of the hot kernels. Run with
// OMP_NUM_THREADS set to compare scaling; the argument is Nx = Np.

#include <random>

#include <benchmark/benchmark.h>

#include "spinkvn/dirac.hpp"
#include "spinkvn/kernels.hpp"
#include "spinkvn/phase_space.hpp"
#include "spinkvn/wigner.hpp"

using namespace spinkvn;

namespace {

WignerMatrixField random_field(const PhaseGrid& g) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  WignerMatrixField w(g);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    for (std::size_t q = 0; q < g.np(); ++q) {
      Matrix4 m;
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) m(r, c) = Complex(n(rng), n(rng));
      }
      w.at(i, q) = m * m.adjoint();
    }
  }
  return w;
}

PhaseGrid grid(const benchmark::State& state) {
  return natural_grid(static_cast<std::size_t>(state.range(0)), -16.0, 16.0, 1.0);
}

template <Exec E>
void sandwich(benchmark::State& state) {
  const PhaseGrid g = grid(state);
  WignerMatrixField w = random_field(g);
  MatrixTable table(g.np());
  for (std::size_t q = 0; q < g.np(); ++q) table[q] = alpha_exponential(0.1, {g.p(q), 0.0, 0.0}, 1e-3);
  for (auto _ : state) {
    kernels::sandwich(w.data(), table, BlockMap{1, g.np()}, E);
    benchmark::DoNotOptimize(w.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.blocks()));
}

template <Exec E>
void projected_trace(benchmark::State& state) {
  const PhaseGrid g = grid(state);
  const WignerMatrixField w = random_field(g);
  const ProjectorTable proj = make_projector_table(g, Potential::free(), Constants{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::projected_trace(w.data(), proj.table, proj.map, g.np(), E));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.blocks()));
}

template <Exec E>
void wigner(benchmark::State& state) {
  const PhaseGrid g = grid(state);
  const SpinorField psi = gaussian_packet(g, {}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(wigner_transform(psi, g, 1.0, E));
}

template <Exec E, EvolutionMode M>
void phase_space_step(benchmark::State& state) {
  const PhaseGrid g = grid(state);
  const Constants k;
  WignerMatrixField w = project_state(random_field(g), Potential::free(), k);
  const PhaseSpacePropagator prop(g, KvnParams{k, 1e-3, Potential::uniform_force(0.2, k), M, E});
  for (auto _ : state) prop.step(w);
}

}  // namespace

BENCHMARK(sandwich<Exec::serial>)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(sandwich<Exec::parallel>)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(projected_trace<Exec::serial>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(projected_trace<Exec::parallel>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(wigner<Exec::serial>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(wigner<Exec::parallel>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(phase_space_step<Exec::serial, EvolutionMode::kvn>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(phase_space_step<Exec::parallel, EvolutionMode::kvn>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(phase_space_step<Exec::serial, EvolutionMode::spohn>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(phase_space_step<Exec::parallel, EvolutionMode::spohn>)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
