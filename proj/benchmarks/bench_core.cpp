#include "chaplygin/dynamics.hpp"
#include "chaplygin/sampling.hpp"

#include <benchmark/benchmark.h>

using namespace chaplygin;

namespace {

struct Fixture {
  explicit Fixture(int n) : sampler(11), model(n, sampler.spd_inertia(n)), p(sampler.phase_point(n)) {}
  Sampler sampler;
  BallModel model;
  PhasePoint p;
};

}  // namespace

static void BM_GroupExp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Sampler sampler(3);
  const AlgebraElement x = sampler.algebra_element(n);
  for (auto _ : state) benchmark::DoNotOptimize(group_exp(x));
}
BENCHMARK(BM_GroupExp)->Arg(3)->Arg(4)->Arg(6);

static void BM_SolveXnh(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_xnh(f.model, f.p));
}
BENCHMARK(BM_SolveXnh)->Arg(3)->Arg(4)->Arg(6);

static void BM_Rkmk4Step(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  IntegratorState s{0.0, 0.0, f.p, Vector::Zero(f.model.n() - 1)};
  for (auto _ : state) {
    s = rkmk4_step(f.model, s, 1e-3);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rkmk4Step)->Arg(3)->Arg(4)->Arg(6);

static void BM_ExteriorDerivative(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const TwoFormOnTS omega = compose_forms(FormTag::OmegaNH);
  for (auto _ : state) benchmark::DoNotOptimize(exterior_derivative_tensor(f.model, omega, f.p));
}
BENCHMARK(BM_ExteriorDerivative)->Arg(3)->Arg(4);

static void BM_ExteriorDerivativeFiniteDifference(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const TwoFormOnTS omega = compose_forms(FormTag::TruncatedJK);
  for (auto _ : state) benchmark::DoNotOptimize(exterior_derivative_tensor(f.model, omega, f.p));
}
BENCHMARK(BM_ExteriorDerivativeFiniteDifference)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
