#include "cobs/selection.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "cobs/error.hpp"
#include "cobs/random.hpp"

namespace cobs {

std::vector<std::size_t> satisfaction_scores(const ClusteringEnsemble& ensemble,
                                             const ConstraintSet& cs) {
  std::vector<std::size_t> scores(ensemble.size());
  for (std::size_t c = 0; c < ensemble.size(); ++c) {
    scores[c] = satisfaction_score(ensemble[c], cs);
  }
  return scores;
}

Selection cobs_select(const ClusteringEnsemble& ensemble, const ConstraintSet& cs,
                      std::uint64_t seed) {
  if (ensemble.empty()) throw InvalidInput("cannot select from an empty ensemble");
  const auto scores = satisfaction_scores(ensemble, cs);
  const std::size_t best = *std::max_element(scores.begin(), scores.end());
  std::vector<std::size_t> tied;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (scores[c] == best) tied.push_back(c);
  }
  Rng rng(seed);
  const auto pick = std::uniform_int_distribution<std::size_t>(0, tied.size() - 1)(rng);
  return {tied[pick], best};
}

Selection numsat_select(const ClusteringEnsemble& ensemble,
                        std::span<const std::size_t> candidates, const ConstraintSet& cs) {
  if (candidates.empty()) throw InvalidInput("no candidate clusterings");
  std::optional<Selection> best;
  int best_clusters = 0;
  for (std::size_t idx : candidates) {
    const auto& c = ensemble[idx];
    const std::size_t score = satisfaction_score(c, cs);
    const int clusters = c.cluster_count();
    const bool better = !best || score > best->score ||
                        (score == best->score &&
                         (clusters < best_clusters || (clusters == best_clusters && idx < best->index)));
    if (better) {
      best = Selection{idx, score};
      best_clusters = clusters;
    }
  }
  return *best;
}

Matrix pairwise_distances(const Matrix& points) {
  const auto n = points.rows();
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
    }
  }
  return d;
}

std::optional<double> silhouette_score(const Matrix& distances, std::span<const Label> labels) {
  const auto expanded = expand_noise(labels);
  const std::size_t n = expanded.size();
  std::unordered_map<Label, std::size_t> dense;
  std::vector<std::size_t> cluster(n);
  for (std::size_t i = 0; i < n; ++i) {
    cluster[i] = dense.emplace(expanded[i], dense.size()).first->second;
  }
  const std::size_t k = dense.size();
  if (k < 2 || k > n - 1) return std::nullopt;

  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t c : cluster) ++sizes[c];

  std::vector<double> sums(k);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[cluster[i]] == 1) continue;  // singleton: s(i) = 0
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      sums[cluster[j]] += distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const double a = sums[cluster[i]] / static_cast<double>(sizes[cluster[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != cluster[i]) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

std::size_t silhouette_select(const Dataset& d, std::span<const Clustering> clusterings) {
  const Matrix distances = pairwise_distances(d.instances);
  std::optional<std::size_t> best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < clusterings.size(); ++c) {
    const auto value = silhouette_score(distances, clusterings[c].assignment);
    if (value && *value > best_value) {
      best_value = *value;
      best = c;
    }
  }
  if (!best) throw InvalidInput("silhouette is undefined for every candidate");
  return *best;
}

}  // namespace cobs
