#include <benchmark/benchmark.h>

#include <memory>
#include <numeric>

#include "cobs/active.hpp"
#include "cobs/ensemble.hpp"
#include "cobs/evaluation.hpp"
#include "cobs/random.hpp"
#include "cobs/selection.hpp"

using namespace cobs;

namespace {

// 931 random partitions of wine-sized data; query cost does not depend on
// how the clusterings were produced.
std::shared_ptr<const ClusteringEnsemble> random_ensemble(std::size_t n, std::size_t size) {
  auto e = std::make_shared<ClusteringEnsemble>();
  Rng rng(3);
  for (std::size_t c = 0; c < size; ++c) {
    const int k = 2 + static_cast<int>(c % 9);
    std::vector<Label> a(n);
    for (auto& v : a) v = static_cast<Label>(rng() % static_cast<unsigned>(k));
    e->clusterings.push_back(Clustering{std::move(a), KMeansParams{k, c}});
  }
  e->reset_weights();
  return e;
}

std::vector<std::size_t> iota_n(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

void BM_ActiveNextQuery(benchmark::State& state) {
  const auto e = random_ensemble(178, 931);
  const ActiveConfig config{1000, 2.0, static_cast<std::size_t>(state.range(0)), 1};
  const auto pool = sample_pool(iota_n(178), config);
  ActiveSession s(e, config, pool);
  Rng rng(5);
  for (auto _ : state) {
    const Pair p = s.next_query();
    state.PauseTiming();
    s.answer(p, rng() % 2 ? ConstraintKind::must_link : ConstraintKind::cannot_link);
    if (s.budget_exhausted() || s.pool_size() == 0) s = ActiveSession(e, config, pool);
    state.ResumeTiming();
  }
}
BENCHMARK(BM_ActiveNextQuery)->Arg(250)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_ActiveSetup(benchmark::State& state) {
  const auto e = random_ensemble(178, 931);
  const ActiveConfig config{50, 2.0, 1000, 1};
  const auto pool = sample_pool(iota_n(178), config);
  for (auto _ : state) benchmark::DoNotOptimize(ActiveSession(e, config, pool));
}
BENCHMARK(BM_ActiveSetup)->Unit(benchmark::kMillisecond);

void BM_CobsSelect(benchmark::State& state) {
  const auto e = random_ensemble(178, 931);
  ConstraintSet cs;
  Rng rng(7);
  while (cs.size() < static_cast<std::size_t>(state.range(0))) {
    const std::size_t i = rng() % 178, j = rng() % 178;
    if (i == j || cs.contains(Pair(i, j))) continue;
    cs.add(Pair(i, j), rng() % 2 ? ConstraintKind::must_link : ConstraintKind::cannot_link);
  }
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cobs_select(*e, cs, seed++));
}
BENCHMARK(BM_CobsSelect)->Arg(10)->Arg(50)->Arg(200);

void BM_AdjustedRandIndex(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(9);
  std::vector<Label> a(n), b(n);
  for (auto& v : a) v = static_cast<Label>(rng() % 7);
  for (auto& v : b) v = static_cast<Label>(rng() % 5) - 1;
  for (auto _ : state) benchmark::DoNotOptimize(adjusted_rand_index(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AdjustedRandIndex)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

}  // namespace
