// Microbenchmarks for the numerical kernels: matrix exponentials, dense
// eigensolves, resolvent factorizations, Cesaro averaging and gauge bounds.
#include <benchmark/benchmark.h>

#include "evdom/evolution.hpp"
#include "evdom/lattice.hpp"
#include "evdom/operators.hpp"
#include "evdom/spectral.hpp"

using namespace evdom;

namespace {

void BM_expm(benchmark::State& state) {
  const OperatorHandle op = build_laplacian(BoundaryKind::neumann, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm(op, 0.5).matrix);
  }
}
BENCHMARK(BM_expm)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_eigensolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    // Rebuild each round: analyze() memoizes per handle, and assembly is
    // quadratic against the cubic solve.
    const OperatorHandle op = build_laplacian(BoundaryKind::nonlocal_symmetric, n);
    benchmark::DoNotOptimize(analyze(op)->spectral_bound);
  }
}
BENCHMARK(BM_eigensolve)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_eigensolve_nonsymmetric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const OperatorHandle op = build_laplacian(BoundaryKind::nonlocal_beta, n, -0.25);
    benchmark::DoNotOptimize(analyze(op)->spectral_bound);
  }
}
BENCHMARK(BM_eigensolve_nonsymmetric)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_resolvent(benchmark::State& state) {
  const OperatorHandle op =
      build_laplacian(BoundaryKind::dirichlet, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolvent(op, 1.0).matrix);
  }
}
BENCHMARK(BM_resolvent)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_cesaro_quadrature(benchmark::State& state) {
  // Spectral bound 0, singular: forces the quadrature path instead of the
  // exact inverse identity.
  const OperatorHandle op = build_laplacian(BoundaryKind::neumann, 64);
  const OperatorHandle shifted = shift_operator(op, analyze(op)->spectral_bound);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cesaro(shifted, 8.0).matrix);
  }
}
BENCHMARK(BM_cesaro_quadrature)->Unit(benchmark::kMillisecond);

void BM_averager_advance(benchmark::State& state) {
  const OperatorHandle op = build_laplacian(BoundaryKind::neumann, 64);
  SemigroupAverager avg(op.matrix, 12);
  double r = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(avg.advance_to(r));
    r += 0.5;  // steady-state cost of one extra half-unit segment
  }
}
BENCHMARK(BM_averager_advance)->Unit(benchmark::kMicrosecond);

void BM_gauge(benchmark::State& state) {
  const OperatorHandle op =
      build_laplacian(BoundaryKind::neumann, static_cast<int>(state.range(0)));
  const LatticeVector u = ones_like(op.grid);
  const LatticeVector f = test_function_fn(2, op.grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauge(f, u).lower);
  }
}
BENCHMARK(BM_gauge)->Arg(128)->Arg(1024)->Unit(benchmark::kNanosecond);

}  // namespace

BENCHMARK_MAIN();
