#include <benchmark/benchmark.h>

#include "cobs/dbscan.hpp"
#include "cobs/kmeans.hpp"
#include "cobs/spectral.hpp"
#include "cobs/synthetic.hpp"

using namespace cobs;

namespace {

Dataset points(std::size_t n) {
  return normalize(synthetic::simplex_blobs(5, n / 5, 0.05, 1));
}

void BM_KMeans(benchmark::State& state) {
  const auto d = points(static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_kmeans(d, 5, seed++));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KMeans)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Complexity();

void BM_NeighborIndex(benchmark::State& state) {
  const auto d = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(NeighborIndex(d.instances));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NeighborIndex)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Complexity();

void BM_Dbscan(benchmark::State& state) {
  const auto d = points(static_cast<std::size_t>(state.range(0)));
  const NeighborIndex index(d.instances);
  for (auto _ : state) benchmark::DoNotOptimize(run_dbscan(index, 0.1, 5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dbscan)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Complexity();

void BM_SpectralEmbedding(benchmark::State& state) {
  const auto d = points(static_cast<std::size_t>(state.range(0)));
  const Matrix w = affinity_matrix(d.instances, KnnGraph{10});
  for (auto _ : state) benchmark::DoNotOptimize(SpectralEmbedding(w, 10));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralEmbedding)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
