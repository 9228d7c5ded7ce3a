#pragma once

#include <cstdint>

#include "cobs/clustering.hpp"
#include "cobs/dataset.hpp"

namespace cobs {

/// Dense symmetric affinity with zero diagonal. kNN graphs are symmetrised
/// by union with unit weights; Gaussian graphs use exp(-d^2 / (2 sigma^2)).
Matrix affinity_matrix(const Matrix& points, const AffinityGraph& graph);

/// Leading eigenvectors of D^-1/2 W D^-1/2, i.e. the eigenvectors of the
/// symmetric normalised Laplacian with smallest eigenvalues. Computed once
/// per graph and reused for every cluster count up to `max_k`.
class SpectralEmbedding {
 public:
  SpectralEmbedding(const Matrix& affinity, int max_k);

  int max_k() const { return static_cast<int>(vectors_.cols()); }
  /// Eigenvalues of the normalised Laplacian, ascending.
  const Eigen::VectorXd& laplacian_eigenvalues() const { return eigenvalues_; }

  /// First `k` eigenvectors as rows, each row scaled to unit length.
  /// Rows of isolated vertices stay zero.
  Matrix embed(int k) const;

 private:
  Matrix vectors_;
  Eigen::VectorXd eigenvalues_;
  std::vector<bool> isolated_;
};

Clustering run_spectral(const Dataset& d, int k, const AffinityGraph& graph, std::uint64_t seed);
Clustering run_spectral(const SpectralEmbedding& embedding, int k, const AffinityGraph& graph,
                        std::uint64_t seed);

}  // namespace cobs
