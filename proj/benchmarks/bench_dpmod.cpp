#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "dpmod/families.hpp"
#include "dpmod/geodesic.hpp"
#include "dpmod/metric.hpp"
#include "dpmod/solver.hpp"

namespace {

using namespace dpmod;

/// Flat torus carrying the default spike member j = 4.
struct SpikeTorus {
  explicit SpikeTorus(int resolution)
      : domain(make_flat(2, resolution, true)),
        g(make_spike(domain, SpikeSchedule::defaults(2).shape(4))),
        pairs(corner_pairs(domain)) {}
  Domain domain;
  MetricField g;
  std::vector<std::pair<int, int>> pairs;
};

double diameter_D(const MetricField& g, const MetricField& g0, double p) {
  const double t = (p - g.mesh()->dimension()) / p;
  return diameter(all_pairs_distances(g)) / std::pow(diameter(all_pairs_distances(g0)), t);
}

void BM_SolveTorus(benchmark::State& state) {
  const SpikeTorus problem(static_cast<int>(state.range(0)));
  const double p = static_cast<double>(state.range(1));
  const GaugeParams params(problem.domain.metric, p, diameter_D(problem.g, problem.domain.metric, p));
  const auto [x, y] = problem.pairs.front();
  int iterations = 0;
  for (auto _ : state) {
    const DistanceResult r = solve_dp(x, y, problem.g, problem.domain.metric, params);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["newton_steps"] = iterations;
  state.counters["holder_pairs"] = static_cast<double>(params.pairs().size());
}
BENCHMARK(BM_SolveTorus)->Args({4, 7})->Args({8, 7})->Args({8, 64})->Unit(benchmark::kMillisecond);

void BM_SolveInterval(benchmark::State& state) {
  const Domain interval = make_flat(1, static_cast<int>(state.range(0)), false);
  const MetricField g = make_conformal_constant(interval.metric, 2.0);
  const GaugeParams params(interval.metric, 4.0, diameter_D(g, interval.metric, 4.0));
  const auto [x, y] = corner_pairs(interval).front();
  for (auto _ : state) benchmark::DoNotOptimize(solve_dp(x, y, g, interval.metric, params).value);
}
BENCHMARK(BM_SolveInterval)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AllPairsDistances(benchmark::State& state) {
  const SpikeTorus problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(all_pairs_distances(problem.g).size());
  state.SetComplexityN(problem.domain.mesh->num_vertices());
}
BENCHMARK(BM_AllPairsDistances)->Arg(8)->Arg(16)->Arg(32)->Complexity();

void BM_GaugeParams(benchmark::State& state) {
  const Domain torus = make_flat(2, static_cast<int>(state.range(0)), true);
  for (auto _ : state) benchmark::DoNotOptimize(GaugeParams(torus.metric, 7.0, 1.0).pairs().size());
}
BENCHMARK(BM_GaugeParams)->Arg(8)->Arg(16);

void BM_PencilNorms(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Matrix a(n, n), b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = normal(rng);
      b(i, j) = normal(rng);
    }
  }
  const Matrix g = a * a.transpose() + Matrix::Identity(n, n);
  const Matrix g0 = b * b.transpose() + Matrix::Identity(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(norm_wrt(g, g0));
    benchmark::DoNotOptimize(inverse_norm_wrt(g, g0));
  }
}
BENCHMARK(BM_PencilNorms)->DenseRange(1, 3);

void BM_HypothesisFunctionals(benchmark::State& state) {
  const SpikeTorus problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypothesis_functionals(problem.g, problem.domain.metric, 7.0).I_inv);
  }
}
BENCHMARK(BM_HypothesisFunctionals)->Arg(8)->Arg(16);

}  // namespace
BENCHMARK_MAIN();
