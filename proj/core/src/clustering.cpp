#include "cobs/clustering.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

namespace cobs {

Algorithm algorithm_of(const Provenance& p) {
  return static_cast<Algorithm>(p.index());
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kmeans: return "kmeans";
    case Algorithm::dbscan: return "dbscan";
    case Algorithm::spectral: return "spectral";
  }
  return "unknown";
}

namespace {

struct Describe {
  std::string operator()(const KMeansParams& p) const {
    return "kmeans K=" + std::to_string(p.k) + " seed=" + std::to_string(p.seed);
  }
  std::string operator()(const DbscanParams& p) const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "dbscan eps=%.6g minPts=%d", p.eps, p.min_pts);
    return buf;
  }
  std::string operator()(const SpectralParams& p) const {
    std::string s = "spectral K=" + std::to_string(p.k);
    if (const auto* knn = std::get_if<KnnGraph>(&p.graph)) {
      s += " knn=" + std::to_string(knn->k);
    } else {
      char buf[48];
      std::snprintf(buf, sizeof buf, " sigma=%.6g", std::get<GaussianGraph>(p.graph).sigma);
      s += buf;
    }
    return s;
  }
};

}  // namespace

std::string describe(const Provenance& p) { return std::visit(Describe{}, p); }

int Clustering::cluster_count() const {
  std::unordered_set<Label> ids;
  for (Label l : assignment) {
    if (l != kNoise) ids.insert(l);
  }
  return static_cast<int>(ids.size());
}

std::size_t Clustering::noise_count() const {
  std::size_t n = 0;
  for (Label l : assignment) n += l == kNoise;
  return n;
}

void canonicalize(std::span<Label> labels) {
  std::unordered_map<Label, Label> remap;
  for (Label& l : labels) {
    if (l == kNoise) continue;
    auto [it, inserted] = remap.emplace(l, static_cast<Label>(remap.size()));
    l = it->second;
  }
}

std::vector<Label> expand_noise(std::span<const Label> labels) {
  Label next = 0;
  for (Label l : labels) next = std::max(next, static_cast<Label>(l + 1));
  std::vector<Label> out(labels.begin(), labels.end());
  for (Label& l : out) {
    if (l == kNoise) l = next++;
  }
  return out;
}

}  // namespace cobs
