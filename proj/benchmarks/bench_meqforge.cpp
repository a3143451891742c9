// Microbenchmarks for the hot paths: bath correlation coefficients,
// diagonalization and jump extraction, generator assembly under each
// secularization policy, original-basis materialization, and the
// steady-state solve.
#include <benchmark/benchmark.h>

#include <meq/meq.hpp>

namespace {

using meq::BathSpec;
using meq::ChainParams;
using meq::ChainSystem;
using meq::SecularPolicy;

ChainParams params_for(int N) {
  ChainParams p;
  p.N = N;
  return p;
}

BathSpec probe_bath() {
  return BathSpec::make(
      0.5, 0.01, 0.1, 100.0,
      {meq::Operator{meq::CompositeSpace::single(2),
                     meq::pauli(meq::PauliKind::X).matrix}},
      "B");
}

void BM_HalfFourierClosedForm(benchmark::State& state) {
  const BathSpec bath = probe_bath();
  double w = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(meq::S_of_omega(w, bath));
    w = w < 5.0 ? w + 0.1 : 0.05;
  }
}
BENCHMARK(BM_HalfFourierClosedForm);

void BM_HalfFourierQuadrature(benchmark::State& state) {
  const BathSpec bath = probe_bath();
  for (auto _ : state)
    benchmark::DoNotOptimize(meq::pv_quadrature_S(1.0, bath));
}
BENCHMARK(BM_HalfFourierQuadrature)->Unit(benchmark::kMicrosecond);

void BM_Diagonalize(benchmark::State& state) {
  const ChainSystem s =
      meq::chain_hamiltonians(params_for(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const auto eig = meq::diagonalize(s.H_full);
    benchmark::DoNotOptimize(eig.energies.data());
  }
  state.SetLabel("dim=" + std::to_string(s.space.total_dim));
}
BENCHMARK(BM_Diagonalize)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_JumpOperators(benchmark::State& state) {
  const ChainSystem s = meq::chain_hamiltonians(params_for(3));
  const auto eig = meq::diagonalize(s.H_full);
  for (auto _ : state) {
    const auto jumps = meq::jump_operators(eig, s.couple_L, "L", 0);
    benchmark::DoNotOptimize(jumps.size());
  }
}
BENCHMARK(BM_JumpOperators)->Unit(benchmark::kMillisecond);

void BM_Assembly(benchmark::State& state, const SecularPolicy& policy) {
  const ChainParams p = params_for(3);
  const ChainSystem s = meq::chain_hamiltonians(p);
  const auto baths = meq::chain_baths(p);
  for (auto _ : state) {
    const auto b = meq::build_liouvillian(s.H_full, s.H_full, baths, policy);
    benchmark::DoNotOptimize(b.kept_pairs);
  }
}
BENCHMARK_CAPTURE(BM_Assembly, redfield, SecularPolicy::redfield())
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Assembly, full_secular, SecularPolicy::full_secular())
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Assembly, partial_1e4, SecularPolicy::partial(1e4))
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Assembly, unified_0p01, SecularPolicy::unified(0.01))
    ->Unit(benchmark::kMillisecond);

// Assembly plus the lazy original-basis materialization (the O(d^5)
// similarity transform); compare against BM_Assembly for the transform cost.
void BM_AssembleAndMaterialize(benchmark::State& state) {
  const ChainParams p = params_for(static_cast<int>(state.range(0)));
  const ChainSystem s = meq::chain_hamiltonians(p);
  const auto baths = meq::chain_baths(p);
  for (auto _ : state) {
    const auto b = meq::build_liouvillian(s.H_full, s.H_full, baths,
                                          SecularPolicy::partial(1e4));
    benchmark::DoNotOptimize(b.total().data());
  }
  state.SetLabel("superop_dim=" +
                 std::to_string(s.space.total_dim * s.space.total_dim));
}
BENCHMARK(BM_AssembleAndMaterialize)->Arg(2)->Arg(3)
    ->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state) {
  const ChainParams p = params_for(static_cast<int>(state.range(0)));
  const ChainSystem s = meq::chain_hamiltonians(p);
  const auto build = meq::build_liouvillian(
      s.H_full, s.H_full, meq::chain_baths(p), SecularPolicy::partial(1e4));
  for (auto _ : state) {
    const auto ss = meq::steady_state(build);
    benchmark::DoNotOptimize(ss.residual);
  }
  state.SetLabel("superop_dim=" +
                 std::to_string(s.space.total_dim * s.space.total_dim));
}
BENCHMARK(BM_SteadyState)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_HeatFlow(benchmark::State& state) {
  const ChainParams p = params_for(3);
  const ChainSystem s = meq::chain_hamiltonians(p);
  const auto build = meq::build_liouvillian(
      s.H_full, s.H_full, meq::chain_baths(p), SecularPolicy::partial(1e4));
  const auto ss = meq::steady_state(build);
  for (auto _ : state) {
    const auto hf = meq::heat_flow(s.H_full, build, ss.rho);
    benchmark::DoNotOptimize(hf.imbalance);
  }
}
BENCHMARK(BM_HeatFlow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
