#include <benchmark/benchmark.h>

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "projpack/analysis.hpp"
#include "projpack/bounds.hpp"
#include "projpack/constructions.hpp"
#include "projpack/frame.hpp"
#include "projpack/optimizer.hpp"
#include "projpack/packing_io.hpp"

using namespace projpack;

namespace {

UnitFrame random_frame(int d, int n, Field field, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd x(d, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i)
      x(i, j) = field.is_real() ? std::complex<double>(gauss(rng), 0.0)
                                : std::complex<double>(gauss(rng), gauss(rng));
  return UnitFrame(field, std::move(x), UnitFrame::kDefaultNormTol, true);
}

void bm_coherence(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const UnitFrame f = random_frame(d, n, Field::complex(), 7);
  for (auto _ : state) benchmark::DoNotOptimize(coherence(f));
}
BENCHMARK(bm_coherence)->Args({3, 9})->Args({5, 30})->Args({7, 49});

void bm_smoothed_gradient(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const UnitFrame f = random_frame(d, n, Field::complex(), 7);
  for (auto _ : state) benchmark::DoNotOptimize(optimizer::smoothed_coherence_grad(f, 800.0));
}
BENCHMARK(bm_smoothed_gradient)->Args({3, 9})->Args({5, 30})->Args({7, 49});

void bm_descent_round(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const UnitFrame f = random_frame(d, n, Field::complex(), 7);
  optimizer::SolverConfig cfg;
  cfg.d = d;
  cfg.n = n;
  cfg.max_iters_per_round = 50;
  for (auto _ : state) benchmark::DoNotOptimize(optimizer::descent_round(f, 400.0, cfg));
}
BENCHMARK(bm_descent_round)->Args({3, 9})->Args({5, 30});

void bm_alternating_projection(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const UnitFrame f = random_frame(d, n, Field::complex(), 7);
  const double target = bounds::best_lower_bound(d, n, Field::complex()).best + 0.05;
  for (auto _ : state)
    benchmark::DoNotOptimize(optimizer::alternating_projection(f, target, 25, false));
}
BENCHMARK(bm_alternating_projection)->Args({3, 9})->Args({5, 30});

void bm_bounds_table(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(bounds::bounds_table_csv(3, 7, 49, Field::complex()));
}
BENCHMARK(bm_bounds_table);

void bm_serialize_parse(benchmark::State& state) {
  const UnitFrame f = random_frame(7, 49, Field::complex(), 7);
  for (auto _ : state) {
    const std::string bytes = io::serialize_packing(f);
    benchmark::DoNotOptimize(io::parse_packing(bytes));
  }
}
BENCHMARK(bm_serialize_parse);

void bm_mub_certify(benchmark::State& state) {
  const UnitFrame f = constructions::mub_maximal(7);
  for (auto _ : state) benchmark::DoNotOptimize(certify(f));
}
BENCHMARK(bm_mub_certify);

}  // namespace

BENCHMARK_MAIN();
