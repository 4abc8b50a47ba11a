#include <benchmark/benchmark.h>

#include "dihedral/central_configs.hpp"
#include "dihedral/params.hpp"
#include "dihedral/potential.hpp"

using namespace dihedral;

static void BM_UDirect(benchmark::State& state) {
  const auto p = make_params(static_cast<int>(state.range(0)), 1.0);
  const SphereConfig s{0.21, 0.47};
  for (auto _ : state) benchmark::DoNotOptimize(u_direct(p, s));
}
BENCHMARK(BM_UDirect)->Arg(2)->Arg(5)->Arg(12);

static void BM_UIntegral(benchmark::State& state) {
  const auto p = make_params(3, 1.0);
  const auto rule =
      numerics::gauss_jacobi_rule(static_cast<int>(state.range(0)), p.beta);
  for (auto _ : state)
    benchmark::DoNotOptimize(u_integral(p, 0.3, 0.6, rule));
}
BENCHMARK(BM_UIntegral)->Arg(32)->Arg(64)->Arg(128);

static void BM_CovariantGradient(benchmark::State& state) {
  const auto p = make_params(5, 1.25);
  const SphereConfig s{0.11, 0.52};
  for (auto _ : state) benchmark::DoNotOptimize(covariant_gradient(p, s));
}
BENCHMARK(BM_CovariantGradient);

static void BM_Hessian(benchmark::State& state) {
  const auto p = make_params(5, 1.25);
  const SphereConfig s{0.11, 0.52};
  for (auto _ : state) benchmark::DoNotOptimize(hessian(p, s));
}
BENCHMARK(BM_Hessian);

static void BM_GaussJacobiBuild(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        numerics::gauss_jacobi_rule(static_cast<int>(state.range(0)), 0.5));
}
BENCHMARK(BM_GaussJacobiBuild)->Arg(64)->Arg(128);

static void BM_FindAll(benchmark::State& state) {
  const auto p = make_params(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(find_all(p));
}
BENCHMARK(BM_FindAll)->Arg(2)->Arg(6);

static void BM_Classify(benchmark::State& state) {
  const auto p = make_params(4, 1.0);
  const auto cc = find_antiprism(p);
  for (auto _ : state) benchmark::DoNotOptimize(classify(p, cc, +1));
}
BENCHMARK(BM_Classify);
