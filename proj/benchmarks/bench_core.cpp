#include <benchmark/benchmark.h>

#include "ddd/energy_force.hpp"
#include "ddd/evolution.hpp"
#include "ddd/geometry.hpp"
#include "ddd/kernels.hpp"

using namespace ddd;

namespace {

const KernelEvaluator& iso() {
  static const KernelEvaluator ev(make_isotropic(1.0, 1.0), MollifierProfile{1.0});
  return ev;
}

DislocationNetwork circle(int n) {
  DislocationNetwork S;
  S.loops.push_back(make_circle_loop({0, 0, 0}, {0, 0, 1}, n / (4.0 * 3.14159), n, BurgersVector::make(S.lattice, {0, 0, 1})));
  return S;
}

void BM_KernelK(benchmark::State& st) {
  Vec3 s(0.3, 1.2, -0.7);
  for (auto _ : st) {
    benchmark::DoNotOptimize(iso().K(s));
    s[0] += 1e-9;
  }
}
BENCHMARK(BM_KernelK);

void BM_KernelCubic(benchmark::State& st) {
  static const KernelEvaluator ev(make_cubic(3.0, 1.5, 1.0), MollifierProfile{1.0}, {32, -1});
  Vec3 s(0.3, 1.2, -0.7);
  for (auto _ : st) benchmark::DoNotOptimize(ev.K(s));
}
BENCHMARK(BM_KernelCubic);

void BM_EnergyLine(benchmark::State& st) {
  const DislocationNetwork S = circle(static_cast<int>(st.range(0)));
  const auto rule = make_line_rule(4);
  for (auto _ : st) benchmark::DoNotOptimize(energy_line(S, iso(), rule).total);
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_EnergyLine)->RangeMultiplier(2)->Range(32, 256)->Complexity(benchmark::oNSquared);

void BM_LineForce(benchmark::State& st) {
  const DislocationNetwork S = circle(static_cast<int>(st.range(0)));
  const auto rule = make_line_rule(4);
  for (auto _ : st) benchmark::DoNotOptimize(pk_force(S, iso(), rule).force.data());
}
BENCHMARK(BM_LineForce)->RangeMultiplier(2)->Range(32, 256);

void BM_VariationalForce(benchmark::State& st) {
  const DislocationNetwork S = circle(static_cast<int>(st.range(0)));
  const auto rule = make_line_rule(4);
  for (auto _ : st) benchmark::DoNotOptimize(variational_force(S, iso(), rule).force.data());
}
BENCHMARK(BM_VariationalForce)->RangeMultiplier(2)->Range(32, 256);

void BM_VelocitySolve(benchmark::State& st) {
  const DislocationNetwork S = circle(static_cast<int>(st.range(0)));
  const ForceField f = variational_force(S, iso(), make_line_rule(4));
  const MobilityModel m;
  for (auto _ : st) benchmark::DoNotOptimize(solve_velocity(S, f, m).velocity.data());
}
BENCHMARK(BM_VelocitySolve)->RangeMultiplier(4)->Range(64, 1024);

void BM_MassRatio(benchmark::State& st) {
  const DislocationNetwork S = circle(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(mass_ratio(S));
}
BENCHMARK(BM_MassRatio)->RangeMultiplier(2)->Range(32, 256);

void BM_EvolutionStep(benchmark::State& st) {
  const Evolution evo(iso(), MobilityModel{}, make_line_rule(4));
  const DislocationNetwork S = circle(128);
  for (auto _ : st) {
    EvolutionState s = evo.start(S);
    evo.step(s, 0.5);
    benchmark::DoNotOptimize(s.network.loops.data());
  }
}
BENCHMARK(BM_EvolutionStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
