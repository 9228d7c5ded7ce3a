#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cobs/clustering.hpp"
#include "cobs/constraints.hpp"
#include "cobs/dataset.hpp"
#include "cobs/ensemble.hpp"

namespace cobs {

struct Selection {
  std::size_t index = 0;  // position in the ensemble (or candidate list)
  std::size_t score = 0;  // satisfied constraints
};

std::vector<std::size_t> satisfaction_scores(const ClusteringEnsemble& ensemble,
                                             const ConstraintSet& cs);

/// Clustering satisfying the most constraints; ties are broken uniformly at
/// random among the maximisers using `seed`.
Selection cobs_select(const ClusteringEnsemble& ensemble, const ConstraintSet& cs,
                      std::uint64_t seed);

/// Like cobs_select over `candidates` (ensemble indices, typically one
/// algorithm's K sweep) but ties go to the fewest clusters, then the lowest
/// index. The returned index is an ensemble index.
Selection numsat_select(const ClusteringEnsemble& ensemble,
                        std::span<const std::size_t> candidates, const ConstraintSet& cs);

/// Mean silhouette coefficient over all points from a precomputed distance
/// matrix. Noise points count as singletons and singletons score 0.
/// Empty when there are fewer than 2 or more than n-1 clusters.
std::optional<double> silhouette_score(const Matrix& distances, std::span<const Label> labels);

Matrix pairwise_distances(const Matrix& points);

/// Clustering with the highest mean silhouette; undefined candidates are
/// skipped. Throws InvalidInput when every candidate is skipped.
std::size_t silhouette_select(const Dataset& d, std::span<const Clustering> clusterings);

}  // namespace cobs
