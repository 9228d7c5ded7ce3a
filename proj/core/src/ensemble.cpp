#include "cobs/ensemble.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>

#include "cobs/dbscan.hpp"
#include "cobs/error.hpp"
#include "cobs/kmeans.hpp"
#include "cobs/random.hpp"
#include "cobs/spectral.hpp"

namespace cobs {

std::vector<int> IntRange::values() const {
  std::vector<int> out;
  for (int v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

std::vector<double> LinSpace::values() const {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {lo};
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count - 1; ++i) out.push_back(lo + step * i);
  out.push_back(hi);
  return out;
}

std::size_t HyperGrid::configuration_count() const {
  std::size_t total = 0;
  if (kmeans) total += kmeans->k.values().size() * static_cast<std::size_t>(std::max(kmeans->seeds, 0));
  if (dbscan) total += static_cast<std::size_t>(std::max(dbscan->eps_count, 0)) * dbscan->min_pts.values().size();
  if (spectral) {
    std::size_t graphs = 0;
    if (spectral->knn) graphs += spectral->knn->values().size();
    if (spectral->sigma) graphs += spectral->sigma->values().size();
    total += graphs * spectral->k.values().size();
  }
  return total;
}

void ClusteringEnsemble::reset_weights() {
  weights.assign(clusterings.size(), clusterings.empty() ? 0.0 : 1.0 / static_cast<double>(clusterings.size()));
}

std::vector<std::size_t> ClusteringEnsemble::indices_of(Algorithm a) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < clusterings.size(); ++i) {
    if (algorithm_of(clusterings[i].provenance) == a) out.push_back(i);
  }
  return out;
}

std::uint64_t spectral_seed(int k, const AffinityGraph& graph) {
  return fnv1a(describe(SpectralParams{k, graph, 0}));
}

namespace {

// Result slot per configuration; empty slots are skipped configurations.
struct Slot {
  std::optional<Clustering> clustering;
  std::optional<SkippedConfig> skipped;
};

void run_tasks(std::vector<std::function<void()>>& tasks, unsigned workers) {
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
      try {
        tasks[t]();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

ClusteringEnsemble generate_ensemble(const Dataset& d, const HyperGrid& grid,
                                     const GenerateOptions& options) {
  const auto n = static_cast<int>(d.size());
  std::vector<Slot> slots(grid.configuration_count());
  std::vector<std::function<void()>> tasks;
  std::size_t next_slot = 0;

  auto too_large = [&](int k, const Provenance& p, Slot& slot) {
    if (k <= n) return false;
    slot.skipped = SkippedConfig{p, "K exceeds the number of instances"};
    return true;
  };

  if (grid.kmeans) {
    for (int k : grid.kmeans->k.values()) {
      for (int s = 0; s < grid.kmeans->seeds; ++s) {
        Slot* slot = &slots[next_slot++];
        const auto seed = static_cast<std::uint64_t>(s);
        if (too_large(k, KMeansParams{k, seed}, *slot)) continue;
        tasks.emplace_back([&d, slot, k, seed] { slot->clustering = run_kmeans(d, k, seed); });
      }
    }
  }

  std::shared_ptr<NeighborIndex> neighbors;
  if (grid.dbscan && grid.dbscan->eps_count > 0 && n >= 2) {
    neighbors = std::make_shared<NeighborIndex>(d.instances);
    const auto stats = distance_stats(d);
    for (double eps : LinSpace{stats.min_d, stats.max_d, grid.dbscan->eps_count}.values()) {
      const auto min_pts = grid.dbscan->min_pts.values();
      Slot* first = &slots[next_slot];
      next_slot += min_pts.size();
      tasks.emplace_back([neighbors, first, eps, min_pts] {
        for (std::size_t m = 0; m < min_pts.size(); ++m) {
          first[m].clustering = run_dbscan(*neighbors, eps, min_pts[m]);
        }
      });
    }
  }

  if (grid.spectral) {
    std::vector<AffinityGraph> graphs;
    if (grid.spectral->knn) {
      for (int k : grid.spectral->knn->values()) graphs.emplace_back(KnnGraph{k});
    }
    if (grid.spectral->sigma) {
      for (double s : grid.spectral->sigma->values()) graphs.emplace_back(GaussianGraph{s});
    }
    const auto ks = grid.spectral->k.values();
    for (const auto& graph : graphs) {
      Slot* first = &slots[next_slot];
      next_slot += ks.size();
      tasks.emplace_back([&d, first, ks, graph, n] {
        int max_k = 0;
        for (int k : ks) {
          if (k <= n) max_k = std::max(max_k, k);
        }
        std::optional<SpectralEmbedding> embedding;
        std::string failure;
        try {
          if (max_k > 0) embedding.emplace(affinity_matrix(d.instances, graph), max_k);
        } catch (const Error& e) {
          failure = e.what();
        }
        for (std::size_t i = 0; i < ks.size(); ++i) {
          const int k = ks[i];
          const SpectralParams params{k, graph, spectral_seed(k, graph)};
          if (k > n) {
            first[i].skipped = SkippedConfig{params, "K exceeds the number of instances"};
          } else if (!embedding) {
            first[i].skipped = SkippedConfig{params, failure};
          } else {
            first[i].clustering = run_spectral(*embedding, k, graph, params.seed);
          }
        }
      });
    }
  }

  run_tasks(tasks, options.workers);

  ClusteringEnsemble ensemble;
  ensemble.dataset_name = d.name;
  ensemble.dataset_hash = fingerprint(d);
  for (auto& slot : slots) {
    if (slot.clustering) {
      ensemble.clusterings.push_back(std::move(*slot.clustering));
    } else if (slot.skipped) {
      ensemble.skipped.push_back(std::move(*slot.skipped));
    }
  }
  ensemble.reset_weights();
  return ensemble;
}

Clustering reproduce(const Dataset& d, const Provenance& provenance) {
  struct Visitor {
    const Dataset& d;
    Clustering operator()(const KMeansParams& p) const { return run_kmeans(d, p.k, p.seed); }
    Clustering operator()(const DbscanParams& p) const { return run_dbscan(d, p.eps, p.min_pts); }
    Clustering operator()(const SpectralParams& p) const {
      return run_spectral(d, p.k, p.graph, p.seed);
    }
  };
  return std::visit(Visitor{d}, provenance);
}

}  // namespace cobs
