#pragma once

#include <cstdint>
#include <vector>

#include "cobs/clustering.hpp"
#include "cobs/dataset.hpp"

namespace cobs {

struct KMeansOptions {
  int max_iterations = 300;
};

/// Full record of one Lloyd run, exposed for inspection and tests.
struct KMeansTrace {
  std::vector<Label> labels;
  Matrix centroids;
  /// Within-cluster sum of squares after every assignment step.
  std::vector<double> inertia;
  int iterations = 0;
  bool converged = false;
};

/// Lloyd iterations from a seeded k-means++ initialisation until the
/// assignment stops changing or the iteration cap is reached. Empty
/// clusters are reseeded at the point farthest from its centroid.
KMeansTrace kmeans_lloyd(const Matrix& points, int k, std::uint64_t seed,
                         const KMeansOptions& options = {});

Clustering run_kmeans(const Dataset& d, int k, std::uint64_t seed);

}  // namespace cobs
