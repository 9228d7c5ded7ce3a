#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cobs/clustering.hpp"
#include "cobs/dataset.hpp"

namespace cobs {

/// Every point's neighbours sorted by distance, so that an eps-range query
/// is a prefix lookup. Quadratic memory; built once per dataset and shared
/// across a DBSCAN grid.
class NeighborIndex {
 public:
  explicit NeighborIndex(const Matrix& points);

  std::size_t size() const { return n_; }

  /// Indices within distance `eps` of point `i` (inclusive, `i` included).
  std::span<const std::uint32_t> within(std::size_t i, double eps) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> order_;
  std::vector<double> dist_;
};

/// Density-based clustering. A point is core when at least `min_pts`
/// points (itself included) lie within `eps`. Clusters are discovered in
/// instance order and a border point joins the first cluster reaching it.
Clustering run_dbscan(const NeighborIndex& index, double eps, int min_pts);
Clustering run_dbscan(const Dataset& d, double eps, int min_pts);

}  // namespace cobs
