#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cobs {

using Label = std::int32_t;
inline constexpr Label kNoise = -1;

struct KMeansParams {
  int k = 2;
  std::uint64_t seed = 0;
  bool operator==(const KMeansParams&) const = default;
};

struct DbscanParams {
  double eps = 0.0;
  int min_pts = 2;
  bool operator==(const DbscanParams&) const = default;
};

struct KnnGraph {
  int k = 10;
  bool operator==(const KnnGraph&) const = default;
};

struct GaussianGraph {
  double sigma = 1.0;
  bool operator==(const GaussianGraph&) const = default;
};

using AffinityGraph = std::variant<KnnGraph, GaussianGraph>;

struct SpectralParams {
  int k = 2;
  AffinityGraph graph = KnnGraph{};
  std::uint64_t seed = 0;
  bool operator==(const SpectralParams&) const = default;
};

/// Algorithm and hyperparameters that produced a clustering. Together with
/// the dataset this reproduces the assignment exactly.
using Provenance = std::variant<KMeansParams, DbscanParams, SpectralParams>;

enum class Algorithm { kmeans, dbscan, spectral };

Algorithm algorithm_of(const Provenance& p);
std::string algorithm_name(Algorithm a);
/// Stable one-line description, e.g. "spectral K=3 knn=7".
std::string describe(const Provenance& p);

struct Clustering {
  std::vector<Label> assignment;
  Provenance provenance;

  std::size_t size() const { return assignment.size(); }

  /// Same-cluster predicate; a noise point shares a cluster with nobody.
  bool together(std::size_t i, std::size_t j) const {
    const Label a = assignment[i];
    return a != kNoise && a == assignment[j];
  }

  /// Number of non-noise clusters.
  int cluster_count() const;
  std::size_t noise_count() const;
};

/// Relabels clusters 0..k-1 in order of first appearance; noise untouched.
void canonicalize(std::span<Label> labels);

/// Maps noise points to fresh ids so that every noise point is a singleton.
std::vector<Label> expand_noise(std::span<const Label> labels);

}  // namespace cobs
