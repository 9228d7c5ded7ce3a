#include <doctest.h>

#include "cobs/ensemble.hpp"
#include "cobs/synthetic.hpp"
#include "test_support.hpp"

using namespace cobs;

TEST_CASE("grid values") {
  CHECK(IntRange{2, 5}.values() == std::vector<int>{2, 3, 4, 5});
  const auto s = LinSpace{0.01, 5.0, 20}.values();
  REQUIRE(s.size() == 20);
  CHECK(s.front() == 0.01);
  CHECK(s.back() == 5.0);
  CHECK(LinSpace{1.0, 1.0, 1}.values() == std::vector<double>{1.0});
  CHECK(HyperGrid::defaults().configuration_count() == 931);
}

TEST_CASE("default grid yields 180 + 400 + 351 clusterings") {
  const auto d = normalize(synthetic::simplex_blobs(3, 30, 0.05, 1));
  const auto e = generate_ensemble(d, HyperGrid::defaults(), {2});
  CHECK(e.skipped.empty());
  CHECK(e.size() == 931);
  CHECK(e.indices_of(Algorithm::kmeans).size() == 180);
  CHECK(e.indices_of(Algorithm::dbscan).size() == 400);
  CHECK(e.indices_of(Algorithm::spectral).size() == 351);
  CHECK(e.weights.size() == 931);
  for (double w : e.weights) CHECK(w == 1.0 / 931.0);

  // block order and grid order
  for (std::size_t i = 0; i < 180; ++i) CHECK(algorithm_of(e[i].provenance) == Algorithm::kmeans);
  for (std::size_t i = 180; i < 580; ++i) CHECK(algorithm_of(e[i].provenance) == Algorithm::dbscan);
  const auto& first_spectral = std::get<SpectralParams>(e[580].provenance);
  CHECK(std::holds_alternative<KnnGraph>(first_spectral.graph));
  CHECK(std::holds_alternative<GaussianGraph>(std::get<SpectralParams>(e[930].provenance).graph));

  for (const auto& c : e.clusterings) {
    CHECK(c.size() == d.size());
  }

  SUBCASE("provenance reproduces every assignment") {
    for (std::size_t i = 0; i < e.size(); i += 7) {
      CHECK(reproduce(d, e[i].provenance).assignment == e[i].assignment);
    }
  }
}

TEST_CASE("restricted grid") {
  const auto d = testing::load_labeled("iris.csv");
  HyperGrid g;
  g.kmeans = KMeansGrid{{2, 2}, 1};
  g.dbscan.reset();
  g.spectral.reset();
  CHECK(g.configuration_count() == 1);
  const auto e = generate_ensemble(d, g);
  CHECK(e.size() == 1);
  CHECK(e.weights == std::vector<double>{1.0});
}

TEST_CASE("worker count does not change the ensemble") {
  const auto d = testing::load_labeled("iris.csv");
  HyperGrid g;
  g.kmeans = KMeansGrid{{2, 5}, 3};
  g.dbscan = DbscanGrid{6, {2, 6}};
  g.spectral = SpectralGrid{{2, 4}, IntRange{3, 6}, LinSpace{0.05, 2.0, 4}};
  const auto one = generate_ensemble(d, g, {1});
  const auto four = generate_ensemble(d, g, {4});
  REQUIRE(one.size() == four.size());
  CHECK(one.size() == g.configuration_count());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].assignment == four[i].assignment);
    CHECK(one[i].provenance == four[i].provenance);
  }
  CHECK(one.dataset_hash == fingerprint(d));
}

TEST_CASE("configurations with K above n are skipped") {
  Dataset d;
  d.instances.resize(4, 1);
  d.instances << 0.0, 0.2, 0.7, 1.0;
  HyperGrid g;
  g.kmeans = KMeansGrid{{2, 6}, 1};
  g.dbscan.reset();
  g.spectral.reset();
  const auto e = generate_ensemble(d, g);
  CHECK(e.size() == 3);
  CHECK(e.skipped.size() == 2);
}

TEST_CASE("clusterings are canonical") {
  const auto d = testing::load_labeled("wine.csv");
  HyperGrid g;
  g.kmeans = KMeansGrid{{2, 10}, 2};
  g.dbscan = DbscanGrid{5, {2, 4}};
  g.spectral = SpectralGrid{{2, 10}, IntRange{5, 5}, std::nullopt};
  const auto e = generate_ensemble(d, g);
  for (const auto& c : e.clusterings) {
    Label next = 0;
    for (Label l : c.assignment) {
      if (l == kNoise) continue;
      CHECK(l <= next);
      if (l == next) ++next;
    }
    CHECK(next == c.cluster_count());
  }
}
