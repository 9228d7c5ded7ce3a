#include "cobs/dbscan.hpp"

#include <algorithm>
#include <numeric>

#include "cobs/error.hpp"

namespace cobs {

NeighborIndex::NeighborIndex(const Matrix& points)
    : n_(static_cast<std::size_t>(points.rows())), order_(n_ * n_), dist_(n_ * n_) {
  std::vector<double> row(n_);
  std::vector<std::uint32_t> idx(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      row[j] = (points.row(static_cast<Eigen::Index>(i)) - points.row(static_cast<Eigen::Index>(j))).norm();
    }
    std::iota(idx.begin(), idx.end(), 0U);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return row[a] < row[b]; });
    for (std::size_t r = 0; r < n_; ++r) {
      order_[i * n_ + r] = idx[r];
      dist_[i * n_ + r] = row[idx[r]];
    }
  }
}

std::span<const std::uint32_t> NeighborIndex::within(std::size_t i, double eps) const {
  const auto first = dist_.begin() + static_cast<std::ptrdiff_t>(i * n_);
  const auto last = first + static_cast<std::ptrdiff_t>(n_);
  const auto count = static_cast<std::size_t>(std::upper_bound(first, last, eps) - first);
  return {order_.data() + i * n_, count};
}

Clustering run_dbscan(const NeighborIndex& index, double eps, int min_pts) {
  if (!(eps > 0.0)) throw InvalidInput("DBSCAN needs eps > 0");
  if (min_pts < 2) throw InvalidInput("DBSCAN needs minPts >= 2");
  const std::size_t n = index.size();
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) {
    core[i] = index.within(i, eps).size() >= static_cast<std::size_t>(min_pts);
  }

  std::vector<Label> labels(n, kNoise);
  std::vector<std::uint32_t> frontier;
  Label next = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!core[seed] || labels[seed] != kNoise) continue;
    const Label id = next++;
    labels[seed] = id;
    frontier.assign(1, static_cast<std::uint32_t>(seed));
    // Only core points expand; a border point keeps the first cluster that
    // reaches it.
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      for (std::uint32_t q : index.within(frontier[head], eps)) {
        if (labels[q] != kNoise) continue;
        labels[q] = id;
        if (core[q]) frontier.push_back(q);
      }
    }
  }
  return Clustering{std::move(labels), DbscanParams{eps, min_pts}};
}

Clustering run_dbscan(const Dataset& d, double eps, int min_pts) {
  return run_dbscan(NeighborIndex(d.instances), eps, min_pts);
}

}  // namespace cobs
