#include "cobs/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cobs/random.hpp"

namespace cobs::synthetic {
namespace {

Dataset assemble(std::string name, Matrix points, std::vector<int> labels) {
  Dataset d;
  d.name = std::move(name);
  d.instances = std::move(points);
  for (Eigen::Index j = 0; j < d.instances.cols(); ++j) d.feature_names.push_back("x" + std::to_string(j));
  int classes = 0;
  for (int l : labels) classes = std::max(classes, l + 1);
  for (int c = 0; c < classes; ++c) d.class_names.push_back(std::to_string(c));
  d.labels = std::move(labels);
  return d;
}

}  // namespace

Dataset blobs(const Matrix& centers, std::size_t per_blob, double stddev, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, stddev);
  const auto n = static_cast<Eigen::Index>(per_blob) * centers.rows();
  Matrix points(n, centers.cols());
  std::vector<int> labels;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < centers.rows(); ++c) {
    for (std::size_t i = 0; i < per_blob; ++i, ++r) {
      for (Eigen::Index j = 0; j < centers.cols(); ++j) points(r, j) = centers(c, j) + noise(rng);
      labels.push_back(static_cast<int>(c));
    }
  }
  return assemble("blobs", std::move(points), std::move(labels));
}

Dataset simplex_blobs(int k, std::size_t per_blob, double stddev, std::uint64_t seed) {
  const Matrix centers = Matrix::Identity(k, k);
  auto d = blobs(centers, per_blob, stddev, seed);
  d.name = "simplex-blobs";
  return d;
}

Dataset two_moons(std::size_t per_moon, double noise, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> jitter(0.0, noise);
  Matrix points(static_cast<Eigen::Index>(2 * per_moon), 2);
  std::vector<int> labels;
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < per_moon; ++i) {
    const double t = pi * static_cast<double>(i) / static_cast<double>(per_moon - 1);
    const auto r = static_cast<Eigen::Index>(i);
    points(r, 0) = std::cos(t) + jitter(rng);
    points(r, 1) = std::sin(t) + jitter(rng);
    labels.push_back(0);
  }
  for (std::size_t i = 0; i < per_moon; ++i) {
    const double t = pi * static_cast<double>(i) / static_cast<double>(per_moon - 1);
    const auto r = static_cast<Eigen::Index>(per_moon + i);
    points(r, 0) = 1.0 - std::cos(t) + jitter(rng);
    points(r, 1) = 0.5 - std::sin(t) + jitter(rng);
    labels.push_back(1);
  }
  return assemble("two-moons", std::move(points), std::move(labels));
}

Dataset two_rings(std::size_t per_ring, double inner_ratio, double noise, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> jitter(0.0, noise);
  Matrix points(static_cast<Eigen::Index>(2 * per_ring), 2);
  std::vector<int> labels;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int ring = 0; ring < 2; ++ring) {
    const double radius = ring == 0 ? 1.0 : inner_ratio;
    for (std::size_t i = 0; i < per_ring; ++i) {
      const double t = two_pi * static_cast<double>(i) / static_cast<double>(per_ring);
      const auto r = static_cast<Eigen::Index>(static_cast<std::size_t>(ring) * per_ring + i);
      points(r, 0) = radius * std::cos(t) + jitter(rng);
      points(r, 1) = radius * std::sin(t) + jitter(rng);
      labels.push_back(ring);
    }
  }
  return assemble("two-rings", std::move(points), std::move(labels));
}

}  // namespace cobs::synthetic
