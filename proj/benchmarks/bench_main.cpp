#include "mixexp/moments.hpp"
#include "mixexp/oracle.hpp"
#include "mixexp/phillips.hpp"
#include "mixexp/quadrature.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace mixexp;

static void BM_BetaMoments(benchmark::State& state) {
  const RatPoly b = *builtin_family("catalan").covariance_poly();
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(beta_moments(b, 100, m));
  }
}
BENCHMARK(BM_BetaMoments)->Arg(4)->Arg(8)->Arg(12);

static void BM_MuMoments(benchmark::State& state) {
  const RatPoly b = *builtin_family("negative_binomial").covariance_poly();
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu_moments(b, {1, 1, 0}, 40, m));
  }
}
BENCHMARK(BM_MuMoments)->Arg(4)->Arg(8)->Arg(12);

static void BM_QuadratureHalfLine(benchmark::State& state) {
  const auto s = builtin_h("betaprime");
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.expectation(20, 7, [](double t) { return std::abs(t - 0.5); }));
  }
}
BENCHMARK(BM_QuadratureHalfLine);

static void BM_EvaluateGrid(benchmark::State& state) {
  const auto p = make_preset("phillips");
  const auto f = TestFunction::abs_shift(1.0);
  const int n = static_cast<int>(state.range(0));
  const auto xs = linspace(0.0, 2.0, 33);
  for (auto _ : state) {
    // A fresh operator each round so the per-k integrals are recomputed.
    benchmark::DoNotOptimize(evaluate_grid(p, f, n, xs));
  }
}
BENCHMARK(BM_EvaluateGrid)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_SamplePhillips(benchmark::State& state) {
  const auto p = make_preset("szasz_baskakov");
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::sample_phillips(p, 50, 1.0, 100'000, 1));
  }
}
BENCHMARK(BM_SamplePhillips)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
