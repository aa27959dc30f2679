#include <benchmark/benchmark.h>

#include <random>

#include "splitcp/detect.hpp"
#include "splitcp/hypotests.hpp"
#include "splitcp/loglik.hpp"
#include "splitcp/seeding.hpp"
#include "splitcp/simgen.hpp"

namespace {

using namespace splitcp;

MetricSeries random_series(SeriesKind kind, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v)
    x = kind == SeriesKind::binary ? (std::bernoulli_distribution(0.3)(rng) ? 1.0 : 0.0)
                                   : std::normal_distribution<double>(94.0, 1.1)(rng);
  return new_metric_series(std::move(v), kind, "bench", "m");
}

void BM_BernoulliProfile(benchmark::State& state) {
  auto s = random_series(SeriesKind::binary, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(bernoulli_lambda_profile(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BernoulliProfile)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_GaussianProfile(benchmark::State& state) {
  auto s = random_series(SeriesKind::continuous, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_lambda_profile(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GaussianProfile)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_FisherExact(benchmark::State& state) {
  const auto n = state.range(0);
  ContingencyTable t{n / 3, n - n / 3, n / 2, n - n / 2};
  for (auto _ : state) benchmark::DoNotOptimize(fisher_exact(t));
}
BENCHMARK(BM_FisherExact)->Arg(50)->Arg(500)->Arg(5000);

void BM_PermutationMonteCarlo(benchmark::State& state) {
  auto x = random_series(SeriesKind::continuous, 300, 3);
  auto y = random_series(SeriesKind::continuous, 300, 4);
  PermutationOptions o;
  o.n_perm = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(perm_test_shift(x.values(), y.values(), 0.5, o));
}
BENCHMARK(BM_PermutationMonteCarlo)->Arg(1000)->Arg(10000);

void BM_DetectCohort(benchmark::State& state) {
  std::vector<MetricSeries> players;
  for (int i = 0; i < 100; ++i) {
    PlantedSpec spec;
    spec.kind = ProfileKind::gaussian;
    spec.segments = {{300, 0.5, 94.0, 1.0}, {300, 0.5, i % 3 ? 94.0 : 92.5, 1.0}};
    spec.seed = derive_seed(5, static_cast<std::uint64_t>(i));
    players.push_back(generate(spec, "p" + std::to_string(i)));
  }
  DetectionConfig cfg;
  cfg.delta = 0.5;
  const auto jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(detect_cohort(players, cfg, jobs));
}
BENCHMARK(BM_DetectCohort)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
