#include "cobs/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "cobs/error.hpp"
#include "cobs/random.hpp"

namespace cobs {
namespace {

// k-means++ seeding: first centre uniform, then proportional to the squared
// distance to the nearest chosen centre.
Matrix seed_centroids(const Matrix& points, int k, Rng& rng) {
  const auto n = points.rows();
  Matrix centroids(k, points.cols());
  std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Eigen::Index pick = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
  for (int c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (double v : nearest) total += v;
      if (total > 0.0) {
        const double target = unit(rng) * total;
        double acc = 0.0;
        pick = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
          acc += nearest[static_cast<std::size_t>(i)];
          if (nearest[static_cast<std::size_t>(i)] > 0.0 && acc >= target) {
            pick = i;
            break;
          }
        }
        if (pick < 0) {
          for (Eigen::Index i = n - 1; i >= 0; --i) {
            if (nearest[static_cast<std::size_t>(i)] > 0.0) {
              pick = i;
              break;
            }
          }
        }
      } else {
        // every point coincides with a centre; take an unused one uniformly
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (!chosen[static_cast<std::size_t>(i)]) free.push_back(i);
        }
        pick = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
      }
    }
    chosen[static_cast<std::size_t>(pick)] = true;
    centroids.row(c) = points.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sq = (points.row(i) - centroids.row(c)).squaredNorm();
      auto& v = nearest[static_cast<std::size_t>(i)];
      v = std::min(v, sq);
    }
  }
  return centroids;
}

// Assigns every point to its nearest centroid (lowest index on ties) and
// returns the resulting within-cluster sum of squares.
double assign(const Matrix& points, const Matrix& centroids, std::vector<Label>& labels,
              std::vector<double>& cost) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Label arg = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double sq = (points.row(i) - centroids.row(c)).squaredNorm();
      if (sq < best) {
        best = sq;
        arg = static_cast<Label>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = arg;
    cost[static_cast<std::size_t>(i)] = best;
    total += best;
  }
  return total;
}

}  // namespace

KMeansTrace kmeans_lloyd(const Matrix& points, int k, std::uint64_t seed,
                         const KMeansOptions& options) {
  const auto n = points.rows();
  if (k < 1) throw InvalidInput("k-means needs K >= 1");
  if (k > n) throw InvalidInput("k-means with K=" + std::to_string(k) + " exceeds n=" + std::to_string(n));

  Rng rng(seed);
  KMeansTrace trace;
  trace.centroids = seed_centroids(points, k, rng);
  const auto un = static_cast<std::size_t>(n);
  trace.labels.assign(un, 0);
  std::vector<Label> previous(un, -1);
  std::vector<double> cost(un, 0.0);
  std::vector<std::size_t> counts(static_cast<std::size_t>(k));
  Matrix sums(k, points.cols());

  bool repaired = false;
  while (true) {
    trace.inertia.push_back(assign(points, trace.centroids, trace.labels, cost));
    if (!repaired && trace.labels == previous) {
      trace.converged = true;
      break;
    }
    if (trace.iterations >= options.max_iterations) break;
    ++trace.iterations;
    previous = trace.labels;

    sums.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < un; ++i) {
      const auto c = static_cast<std::size_t>(trace.labels[i]);
      sums.row(static_cast<Eigen::Index>(c)) += points.row(static_cast<Eigen::Index>(i));
      ++counts[c];
    }
    repaired = false;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        trace.centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }
    // Empty clusters take the point farthest from its centroid, provided
    // that point does not leave its own cluster empty.
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      std::size_t far = un;
      double far_sq = -1.0;
      for (std::size_t i = 0; i < un; ++i) {
        const auto own = static_cast<std::size_t>(trace.labels[i]);
        if (counts[own] < 2) continue;
        const double sq = (points.row(static_cast<Eigen::Index>(i)) -
                           trace.centroids.row(static_cast<Eigen::Index>(own)))
                              .squaredNorm();
        if (sq > far_sq) {
          far_sq = sq;
          far = i;
        }
      }
      if (far == un) continue;
      --counts[static_cast<std::size_t>(trace.labels[far])];
      trace.labels[far] = static_cast<Label>(c);
      counts[static_cast<std::size_t>(c)] = 1;
      trace.centroids.row(c) = points.row(static_cast<Eigen::Index>(far));
      repaired = true;
    }
  }
  return trace;
}

Clustering run_kmeans(const Dataset& d, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidInput("k-means needs K >= 2");
  auto trace = kmeans_lloyd(d.instances, k, seed);
  Clustering c{std::move(trace.labels), KMeansParams{k, seed}};
  canonicalize(c.assignment);
  return c;
}

}  // namespace cobs
