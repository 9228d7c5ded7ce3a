#include "cobs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "cobs/error.hpp"
#include "cobs/kmeans.hpp"

namespace cobs {

Matrix affinity_matrix(const Matrix& points, const AffinityGraph& graph) {
  const auto n = points.rows();
  Matrix w = Matrix::Zero(n, n);
  if (const auto* knn = std::get_if<KnnGraph>(&graph)) {
    if (knn->k < 1 || knn->k >= n) {
      throw InvalidInput("kNN graph needs 1 <= k < n (k=" + std::to_string(knn->k) + ")");
    }
    std::vector<double> dist(static_cast<std::size_t>(n));
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        dist[static_cast<std::size_t>(j)] = (points.row(i) - points.row(j)).squaredNorm();
      }
      std::iota(idx.begin(), idx.end(), Eigen::Index{0});
      auto by_distance = [&](Eigen::Index a, Eigen::Index b) {
        const double da = dist[static_cast<std::size_t>(a)];
        const double db = dist[static_cast<std::size_t>(b)];
        return da < db || (da == db && a < b);
      };
      // position 0 after sorting is i itself
      std::swap(idx[0], idx[static_cast<std::size_t>(i)]);
      std::partial_sort(idx.begin() + 1, idx.begin() + 1 + knn->k, idx.end(), by_distance);
      for (int r = 1; r <= knn->k; ++r) {
        const Eigen::Index j = idx[static_cast<std::size_t>(r)];
        w(i, j) = 1.0;
        w(j, i) = 1.0;
      }
    }
  } else {
    const double sigma = std::get<GaussianGraph>(graph).sigma;
    if (!(sigma > 0.0)) throw InvalidInput("Gaussian graph needs sigma > 0");
    const double denom = 2.0 * sigma * sigma;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = std::exp(-(points.row(i) - points.row(j)).squaredNorm() / denom);
        w(i, j) = v;
        w(j, i) = v;
      }
    }
  }
  return w;
}

SpectralEmbedding::SpectralEmbedding(const Matrix& affinity, int max_k) {
  const auto n = affinity.rows();
  if (max_k < 1 || max_k > n) throw InvalidInput("embedding dimension out of range");
  Eigen::VectorXd inv_sqrt(n);
  isolated_.assign(static_cast<std::size_t>(n), false);
  bool any_edge = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double deg = affinity.row(i).sum();
    if (deg > 0.0) {
      inv_sqrt(i) = 1.0 / std::sqrt(deg);
      any_edge = true;
    } else {
      inv_sqrt(i) = 0.0;
      isolated_[static_cast<std::size_t>(i)] = true;
    }
  }
  if (!any_edge) throw SpectralFailure("affinity graph has no edges");

  // D^-1/2 W D^-1/2 = I - L_sym; its largest eigenvalues are the smallest
  // eigenvalues of the normalised Laplacian.
  Eigen::MatrixXd normalized = inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized);
  if (solver.info() != Eigen::Success) throw SpectralFailure("eigensolver did not converge");

  vectors_.resize(n, max_k);
  eigenvalues_.resize(max_k);
  for (int c = 0; c < max_k; ++c) {
    const Eigen::Index src = n - 1 - c;  // eigenvalues are ascending
    vectors_.col(c) = solver.eigenvectors().col(src);
    eigenvalues_(c) = 1.0 - solver.eigenvalues()(src);
  }
  if (!vectors_.allFinite()) throw SpectralFailure("non-finite eigenvectors");
}

Matrix SpectralEmbedding::embed(int k) const {
  if (k < 1 || k > max_k()) throw InvalidInput("embedding dimension out of range");
  Matrix rows = vectors_.leftCols(k);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (isolated_[static_cast<std::size_t>(i)] || norm == 0.0) {
      rows.row(i).setZero();
    } else {
      rows.row(i) /= norm;
    }
  }
  return rows;
}

Clustering run_spectral(const SpectralEmbedding& embedding, int k, const AffinityGraph& graph,
                        std::uint64_t seed) {
  if (k < 2) throw InvalidInput("spectral clustering needs K >= 2");
  auto trace = kmeans_lloyd(embedding.embed(k), k, seed);
  Clustering c{std::move(trace.labels), SpectralParams{k, graph, seed}};
  canonicalize(c.assignment);
  return c;
}

Clustering run_spectral(const Dataset& d, int k, const AffinityGraph& graph, std::uint64_t seed) {
  if (k < 2 || static_cast<std::size_t>(k) > d.size()) {
    throw InvalidInput("spectral clustering needs 2 <= K <= n");
  }
  const SpectralEmbedding embedding(affinity_matrix(d.instances, graph), k);
  return run_spectral(embedding, k, graph, seed);
}

}  // namespace cobs
