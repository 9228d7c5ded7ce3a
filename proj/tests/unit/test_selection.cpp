#include <doctest.h>

#include <algorithm>
#include <map>

#include "cobs/error.hpp"
#include "cobs/kmeans.hpp"
#include "cobs/random.hpp"
#include "cobs/selection.hpp"
#include "cobs/synthetic.hpp"
#include "test_support.hpp"

using namespace cobs;

namespace {

std::vector<Label> random_labels(Rng& rng, std::size_t n, int k) {
  std::vector<Label> l(n);
  for (auto& v : l) v = static_cast<Label>(rng() % static_cast<unsigned>(k + 1)) - 1;
  return l;
}

}  // namespace

TEST_CASE("cobs_select returns a maximiser") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5 + rng() % 25;
    std::vector<std::vector<Label>> as;
    const std::size_t members = 1 + rng() % 30;
    for (std::size_t c = 0; c < members; ++c) as.push_back(random_labels(rng, n, 1 + static_cast<int>(rng() % 4)));
    const auto e = testing::ensemble_of(as);
    ConstraintSet cs;
    const auto truth = random_labels(rng, n, 3);
    Rng pick(rng());
    while (cs.size() < std::min<std::size_t>(12, n * (n - 1) / 2)) {
      const std::size_t i = pick() % n, j = pick() % n;
      if (i == j || cs.contains(Pair(i, j))) continue;
      cs.add(Pair(i, j), testing::same(truth, i, j) ? ConstraintKind::must_link : ConstraintKind::cannot_link);
    }
    std::size_t best = 0;
    for (const auto& c : e.clusterings) best = std::max(best, satisfaction_score(c, cs));
    const auto sel = cobs_select(e, cs, rng());
    CHECK(sel.score == best);
    CHECK(satisfaction_score(e[sel.index], cs) == best);
  }
}

TEST_CASE("empty constraint set picks uniformly among all clusterings") {
  const auto e = testing::ensemble_of(std::vector<std::vector<Label>>(5, std::vector<Label>{0, 1}));
  std::map<std::size_t, int> hits;
  for (std::uint64_t seed = 0; seed < 5000; ++seed) ++hits[cobs_select(e, {}, seed).index];
  CHECK(hits.size() == 5);
  for (const auto& [idx, count] : hits) CHECK(std::abs(count - 1000) < 150);
  CHECK(cobs_select(e, {}, 42).index == cobs_select(e, {}, 42).index);
}

TEST_CASE("ties are broken among maximisers only") {
  // members 1 and 3 satisfy both constraints
  const auto e = testing::ensemble_of({{0, 1, 1}, {0, 0, 1}, {0, 0, 0}, {1, 1, 0}});
  ConstraintSet cs;
  cs.add(Pair(0, 1), ConstraintKind::must_link);
  cs.add(Pair(1, 2), ConstraintKind::cannot_link);
  std::map<std::size_t, int> hits;
  for (std::uint64_t seed = 0; seed < 400; ++seed) ++hits[cobs_select(e, cs, seed).index];
  CHECK(hits.size() == 2);
  CHECK(hits.contains(1));
  CHECK(hits.contains(3));
}

TEST_CASE("numsat") {
  SUBCASE("fewest clusters wins a tie") {
    const auto e = testing::ensemble_of({{0, 1, 2, 3, 4, 0}, {0, 1, 1, 1, 1, 0}});
    ConstraintSet cs;
    cs.add(Pair(0, 5), ConstraintKind::must_link);
    const std::vector<std::size_t> cand{0, 1};
    CHECK(numsat_select(e, cand, cs).index == 1);
  }
  SUBCASE("single candidate") {
    const auto e = testing::ensemble_of({{0, 1}, {0, 0}});
    const std::vector<std::size_t> cand{1};
    CHECK(numsat_select(e, cand, {}).index == 1);
    CHECK_THROWS_AS(numsat_select(e, std::vector<std::size_t>{}, {}), InvalidInput);
  }
  SUBCASE("planted three classes") {
    const auto d = synthetic::simplex_blobs(3, 20, 0.02, 6);
    std::vector<std::vector<Label>> sweep;
    for (int k = 2; k <= 6; ++k) sweep.push_back(run_kmeans(d, k, 1).assignment);
    const auto e = testing::ensemble_of(sweep);
    // one violated constraint per wrong K: a cannot-link inside a merged
    // cluster or a must-link across a split class, then random padding
    const auto& y = *d.labels;
    ConstraintSet cs;
    for (std::size_t c = 0; c < e.size(); ++c) {
      if (c == 1) continue;
      bool added = false;
      for (std::size_t i = 0; i < d.size() && !added; ++i) {
        for (std::size_t j = i + 1; j < d.size() && !added; ++j) {
          const bool same_class = y[i] == y[j];
          if (e[c].together(i, j) != same_class && !cs.contains(Pair(i, j))) {
            cs.add(Pair(i, j), same_class ? ConstraintKind::must_link : ConstraintKind::cannot_link);
            added = true;
          }
        }
      }
    }
    LabelOracle oracle(d);
    Rng rng(12);
    while (cs.size() < 10) {
      const std::size_t i = rng() % d.size(), j = rng() % d.size();
      if (i == j || cs.contains(Pair(i, j))) continue;
      cs.add(Pair(i, j), oracle.query(Pair(i, j)));
    }
    // enumerate: only the K = 3 member satisfies all ten
    std::vector<std::size_t> full;
    for (std::size_t c = 0; c < e.size(); ++c) {
      if (satisfaction_score(e[c], cs) == cs.size()) full.push_back(c);
    }
    REQUIRE(full == std::vector<std::size_t>{1});
    const std::vector<std::size_t> cand{0, 1, 2, 3, 4};
    CHECK(numsat_select(e, cand, cs).index == 1);
  }
}

TEST_CASE("silhouette matches the textbook definition") {
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + rng() % 40;
    Matrix x(static_cast<Eigen::Index>(n), 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = static_cast<double>(rng() % 1000) / 1000.0;
    const auto labels = random_labels(rng, n, 1 + static_cast<int>(rng() % 5));
    const auto got = silhouette_score(pairwise_distances(x), labels);
    const auto want = testing::brute_silhouette(x, labels);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(std::abs(*got - *want) <= 1e-9);
  }
}

TEST_CASE("silhouette edge cases") {
  Matrix x(3, 1);
  x << 0.0, 0.5, 1.0;
  const auto dist = pairwise_distances(x);
  CHECK_FALSE(silhouette_score(dist, std::vector<Label>{0, 0, 0}).has_value());
  CHECK_FALSE(silhouette_score(dist, std::vector<Label>{0, 1, 2}).has_value());
  CHECK_FALSE(silhouette_score(dist, std::vector<Label>{kNoise, kNoise, kNoise}).has_value());
  CHECK(silhouette_score(dist, std::vector<Label>{0, 0, 1}).has_value());
}

TEST_CASE("silhouette picks K = 3 on three blobs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = normalize(synthetic::simplex_blobs(3, 30, 0.02, seed));
    std::vector<Clustering> sweep;
    for (int k = 2; k <= 6; ++k) sweep.push_back(run_kmeans(d, k, seed));
    CHECK(silhouette_select(d, sweep) == 1);
  }
  const auto d = normalize(synthetic::simplex_blobs(3, 10, 0.02, 1));
  std::vector<Clustering> only_one{Clustering{std::vector<Label>(d.size(), 0), KMeansParams{}}};
  CHECK_THROWS_AS(silhouette_select(d, only_one), InvalidInput);
}
