#include <benchmark/benchmark.h>

#include "extphase/config.hpp"
#include "extphase/implicit_rk.hpp"
#include "extphase/projection.hpp"
#include "extphase/splitting.hpp"

namespace {

using namespace extphase;

const ExperimentSpec& nls_spec() {
  static const ExperimentSpec spec = preset("nls_bench");
  return spec;
}

Composition composition_for(int order) {
  return order == 2 ? Composition::single
         : order == 4 ? Composition::triple_jump_4
                      : Composition::yoshida_6;
}

void BM_NlsGradient(benchmark::State& state) {
  const NlsSystem system(5);
  Evaluator ev(system);
  const PhasePoint z = initial_state(nls_spec());
  for (auto _ : state) {
    ev.gradient(z.q(), z.p());
    benchmark::DoNotOptimize(ev.dq().data());
  }
}
BENCHMARK(BM_NlsGradient);

void BM_VortexGradient(benchmark::State& state) {
  const ExperimentSpec spec = preset("vortex10");
  const VortexSystem system(VortexConfig(spec.circulations, spec.planar_positions));
  Evaluator ev(system);
  const PhasePoint z = system.initial_state();
  for (auto _ : state) {
    ev.gradient(z.q(), z.p());
    benchmark::DoNotOptimize(ev.dq().data());
  }
}
BENCHMARK(BM_VortexGradient);

void BM_PihajokiStep(benchmark::State& state) {
  const NlsSystem system(5);
  Evaluator ev(system);
  ExtendedPoint zeta = embed(initial_state(nls_spec()));
  const ExtendedStep step = ExtendedStep::pihajoki(
      CompositionScheme(composition_for(static_cast<int>(state.range(0)))));
  for (auto _ : state) {
    step(ev, 1e-3, zeta);
    benchmark::DoNotOptimize(zeta.packed().data());
  }
}
BENCHMARK(BM_PihajokiStep)->Arg(2)->Arg(4)->Arg(6);

void BM_TaoStep(benchmark::State& state) {
  const NlsSystem system(5);
  Evaluator ev(system);
  ExtendedPoint zeta = embed(initial_state(nls_spec()));
  const ExtendedStep step = ExtendedStep::tao(
      TaoParams{100.0}, CompositionScheme(composition_for(static_cast<int>(state.range(0)))));
  for (auto _ : state) {
    step(ev, 1e-3, zeta);
    benchmark::DoNotOptimize(zeta.packed().data());
  }
}
BENCHMARK(BM_TaoStep)->Arg(2)->Arg(4)->Arg(6);

void BM_SemiexplicitStep(benchmark::State& state) {
  const NlsSystem system(5);
  Evaluator ev(system);
  PhasePoint z = initial_state(nls_spec());
  SemiexplicitStepper stepper(
      ExtendedStep::pihajoki(CompositionScheme(composition_for(static_cast<int>(state.range(0))))),
      SolverConfig(1e-10, 100));
  for (auto _ : state) {
    z = stepper.step(ev, 1e-3, z).z;
    benchmark::DoNotOptimize(z.packed().data());
  }
  state.counters["vf_per_step"] = benchmark::Counter(
      static_cast<double>(ev.counter().gradient_evals()), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SemiexplicitStep)->Arg(2)->Arg(4)->Arg(6);

void BM_GaussLegendreStep(benchmark::State& state) {
  const NlsSystem system(5);
  Evaluator ev(system);
  PhasePoint z = initial_state(nls_spec());
  GaussLegendreStepper stepper(gl_tableau(static_cast<int>(state.range(0))),
                               SolverConfig(1e-10, 100));
  for (auto _ : state) {
    z = stepper.step(ev, 1e-3, z).z;
    benchmark::DoNotOptimize(z.packed().data());
  }
  state.counters["vf_per_step"] = benchmark::Counter(
      static_cast<double>(ev.counter().gradient_evals()), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_GaussLegendreStep)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
