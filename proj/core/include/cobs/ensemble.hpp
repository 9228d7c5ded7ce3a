#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cobs/clustering.hpp"
#include "cobs/dataset.hpp"

namespace cobs {

struct IntRange {
  int lo = 0;
  int hi = 0;  // inclusive
  std::vector<int> values() const;
  bool operator==(const IntRange&) const = default;
};

/// `count` evenly spaced values from lo to hi, both endpoints included.
struct LinSpace {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  std::vector<double> values() const;
  bool operator==(const LinSpace&) const = default;
};

struct KMeansGrid {
  IntRange k{2, 10};
  int seeds = 20;
  bool operator==(const KMeansGrid&) const = default;
};

/// eps sweeps [min_d, max_d] of the normalised dataset.
struct DbscanGrid {
  int eps_count = 20;
  IntRange min_pts{2, 21};
  bool operator==(const DbscanGrid&) const = default;
};

struct SpectralGrid {
  IntRange k{2, 10};
  std::optional<IntRange> knn = IntRange{2, 20};
  std::optional<LinSpace> sigma = LinSpace{0.01, 5.0, 20};
  bool operator==(const SpectralGrid&) const = default;
};

/// Hyperparameter sweep; an unset block disables that algorithm.
struct HyperGrid {
  std::optional<KMeansGrid> kmeans = KMeansGrid{};
  std::optional<DbscanGrid> dbscan = DbscanGrid{};
  std::optional<SpectralGrid> spectral = SpectralGrid{};

  /// 180 K-means + 400 DBSCAN + 351 spectral = 931 configurations.
  static HyperGrid defaults() { return {}; }
  std::size_t configuration_count() const;
  bool operator==(const HyperGrid&) const = default;
};

struct SkippedConfig {
  Provenance provenance;
  std::string reason;
};

struct ClusteringEnsemble {
  std::string dataset_name;
  std::uint64_t dataset_hash = 0;
  std::vector<Clustering> clusterings;
  std::vector<double> weights;
  std::vector<SkippedConfig> skipped;

  std::size_t size() const { return clusterings.size(); }
  bool empty() const { return clusterings.empty(); }
  const Clustering& operator[](std::size_t i) const { return clusterings[i]; }

  /// Resets every weight to 1/|C|.
  void reset_weights();
  /// Indices of clusterings produced by `a`, in ensemble order.
  std::vector<std::size_t> indices_of(Algorithm a) const;
};

struct GenerateOptions {
  unsigned workers = 1;
};

/// Runs every configuration of the grid: the K-means block, then DBSCAN,
/// then spectral (kNN graphs before Gaussian graphs), each in grid order.
/// The result does not depend on the worker count. Spectral
/// configurations whose embedding fails are left out and listed in
/// `skipped`.
ClusteringEnsemble generate_ensemble(const Dataset& d, const HyperGrid& grid,
                                     const GenerateOptions& options = {});

/// Seed used for the K-means step of a spectral configuration.
std::uint64_t spectral_seed(int k, const AffinityGraph& graph);

/// Re-runs a single configuration.
Clustering reproduce(const Dataset& d, const Provenance& provenance);

}  // namespace cobs
