#include <benchmark/benchmark.h>

#include "dihedral/mcgehee.hpp"

using namespace dihedral;

static void BM_VectorField(benchmark::State& state) {
  const auto p = make_params(static_cast<int>(state.range(0)), 1.0);
  const McGeheeState x{0.8, 0.2, 0.5, 0.1, -0.2};
  for (auto _ : state) benchmark::DoNotOptimize(vector_field(p, x));
}
BENCHMARK(BM_VectorField)->Arg(2)->Arg(5)->Arg(12);

static void BM_IntegrateParabolic(benchmark::State& state) {
  const auto p = make_params(3, 1.0);
  McGeheeState x0{0.9, 0.3, 0.5, 0.1, -0.1};
  x0 = project_to_parabolic(p, x0);
  numerics::IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_partial(p, x0, {0.0, 1.0}, cfg));
}
BENCHMARK(BM_IntegrateParabolic);

static void BM_HomotheticLift(benchmark::State& state) {
  const auto p = make_params(3, 1.0);
  const auto cc = find_ngon(p);
  numerics::IntegratorConfig cfg;
  cfg.max_step = 0.01;
  const auto traj = homothetic(p, cc, cc.v_bar, {0.0, 1.0}, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(lift(p, traj, 1.0));
}
BENCHMARK(BM_HomotheticLift);
