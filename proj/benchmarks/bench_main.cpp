#include <benchmark/benchmark.h>

#include <map>

#include "cluster_sense/dataset.hpp"
#include "cluster_sense/kmeans.hpp"
#include "cluster_sense/metrics.hpp"
#include "cluster_sense/perturb.hpp"

namespace cs = cluster_sense;

namespace {

const cs::LabeledDataset& dataset(int dims) {
  static std::map<int, cs::LabeledDataset> cache;
  auto it = cache.find(dims);
  if (it == cache.end()) {
    cs::GeneratorParams p;
    p.dims = dims;
    p.seed = 7;
    it = cache.emplace(dims, cs::generate_dim_like(p)).first;
  }
  return it->second;
}

void BM_KMeansFit(benchmark::State& state) {
  const auto& d = dataset(static_cast<int>(state.range(0)));
  cs::KMeansConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cs::fit(d.points(), cfg).inertia);
    ++cfg.seed;
  }
}
BENCHMARK(BM_KMeansFit)->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_KMeansFitWithNoise(benchmark::State& state) {
  const auto& d = dataset(32);
  const auto stats = cs::compute_stats(d);
  const auto m = cs::append_noise_columns(
      d.points(), {cs::NoiseKind::uniform, stats.mu, stats.sigma, 3}, 96);
  cs::KMeansConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cs::fit(m, cfg).inertia);
    ++cfg.seed;
  }
}
BENCHMARK(BM_KMeansFitWithNoise)->Unit(benchmark::kMillisecond);

void BM_DistanceMatrix(benchmark::State& state) {
  const auto& d = dataset(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cs::DistanceMatrix(d.points())(1, 2));
}
BENCHMARK(BM_DistanceMatrix)->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Silhouette(benchmark::State& state) {
  const auto& d = dataset(32);
  const cs::DistanceMatrix dm(d.points());
  for (auto _ : state) benchmark::DoNotOptimize(cs::silhouette(dm, d.labels()));
}
BENCHMARK(BM_Silhouette)->Unit(benchmark::kMillisecond);

void BM_AdjustedRandIndex(benchmark::State& state) {
  const auto& d = dataset(32);
  std::vector<int> predicted(d.labels().rbegin(), d.labels().rend());
  for (auto _ : state) {
    benchmark::DoNotOptimize(cs::adjusted_rand_index(cs::PartitionPair(predicted, d.labels())));
  }
}
BENCHMARK(BM_AdjustedRandIndex);

void BM_AppendNoise(benchmark::State& state) {
  const auto& d = dataset(256);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cs::append_noise_columns(d.points(), {cs::NoiseKind::gaussian, 0.0, 1.0, 1}, 768).rows());
  }
}
BENCHMARK(BM_AppendNoise)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
