#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cobs/dataset.hpp"
#include "cobs/error.hpp"
#include "cobs/random.hpp"
#include "test_support.hpp"

using namespace cobs;

TEST_CASE("iris loads as 147 unique rows") {
  const auto raw = load_dataset(testing::data_file("iris.csv"), CsvOptions{"class", {}});
  CHECK(raw.size() == 147);
  CHECK(raw.dims() == 4);
  CHECK(raw.class_count() == 3);
  REQUIRE(raw.labeled());
  CHECK(raw.labels->size() == 147);
  CHECK(raw.feature_names.size() == 4);
}

TEST_CASE("wine loads with a leading label column") {
  const auto raw = load_dataset(testing::data_file("wine.csv"), CsvOptions{"0", {}});
  CHECK(raw.size() == 178);
  CHECK(raw.dims() == 13);
  CHECK(raw.class_count() == 3);
}

TEST_CASE("parsing") {
  SUBCASE("empty input") {
    CHECK_THROWS_WITH_AS(parse_dataset(""), "empty dataset", InvalidInput);
    CHECK_THROWS_WITH_AS(parse_dataset("a,b,c\n"), "empty dataset", InvalidInput);
  }
  SUBCASE("rows with a missing cell are dropped") {
    const auto d = parse_dataset("1,2,a\n3,4,a\n5,6,b\n,8,b\n9,10,a\n", CsvOptions{"-1", {}});
    CHECK(d.size() == 4);
    CHECK(d.instances(3, 0) == 9.0);
  }
  SUBCASE("missing markers") {
    const auto d = parse_dataset("1,2\n?,3\nNA,4\nNaN,5\n6,7\n");
    CHECK(d.size() == 2);
    CHECK_FALSE(d.labeled());
  }
  SUBCASE("duplicates dropped, first occurrence kept in order") {
    const auto d = parse_dataset("x,y,c\n1,1,a\n2,2,b\n1,1,b\n3,3,a\n2,2,a\n", CsvOptions{"c", {}});
    REQUIRE(d.size() == 3);
    CHECK(d.instances(0, 0) == 1.0);
    CHECK(d.instances(1, 0) == 2.0);
    CHECK(d.instances(2, 0) == 3.0);
    CHECK(*d.labels == std::vector<int>{0, 1, 0});
    CHECK(d.class_names == std::vector<std::string>{"a", "b"});
  }
  SUBCASE("non-numeric feature") {
    CHECK_THROWS_AS(parse_dataset("1,2\n3,x\n"), InvalidInput);
  }
  SUBCASE("ragged row") {
    CHECK_THROWS_AS(parse_dataset("1,2\n3\n"), InvalidInput);
  }
  SUBCASE("unknown label column") {
    CHECK_THROWS_AS(parse_dataset("a,b\n1,2\n", CsvOptions{"z", {}}), InvalidInput);
    CHECK_THROWS_AS(parse_dataset("1,2\n3,4\n", CsvOptions{"5", {}}), InvalidInput);
  }
}

TEST_CASE("normalize") {
  Dataset d;
  d.instances.resize(3, 3);
  d.instances << 2, 3, 0, 4, 3, 1, 6, 3, 0.5;
  const auto n = normalize(d);
  CHECK(n.instances(0, 0) == 0.0);
  CHECK(n.instances(1, 0) == 0.5);
  CHECK(n.instances(2, 0) == 1.0);
  for (int i = 0; i < 3; ++i) CHECK(n.instances(i, 1) == 0.0);
  CHECK(n.instances(0, 2) == 0.0);
  CHECK(n.instances(1, 2) == 1.0);

  SUBCASE("idempotent") {
    for (const auto& file : {"iris.csv", "wine.csv"}) {
      const auto once = testing::load_labeled(file);
      const auto twice = normalize(once);
      CHECK((once.instances.array() == twice.instances.array()).all());
    }
  }
  SUBCASE("range") {
    const auto w = testing::load_labeled("wine.csv");
    CHECK(w.instances.minCoeff() == 0.0);
    CHECK(w.instances.maxCoeff() == 1.0);
  }
}

TEST_CASE("distance_stats") {
  SUBCASE("single pair") {
    Dataset d;
    d.instances.resize(2, 2);
    d.instances << 0, 0, 3, 4;
    const auto s = distance_stats(normalize(d));
    CHECK(s.min_d == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s.max_d == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("collinear") {
    Dataset d;
    d.instances.resize(3, 1);
    d.instances << 0, 0.5, 1;
    const auto s = distance_stats(d);
    CHECK(s.min_d == 0.5);
    CHECK(s.max_d == 1.0);
  }
  SUBCASE("matches an independent scan") {
    const auto d = testing::load_labeled("iris.csv");
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double s = 0.0;
        for (std::size_t f = 0; f < d.dims(); ++f) {
          const double t = d.instances(i, f) - d.instances(j, f);
          s += t * t;
        }
        const double dist = std::sqrt(s);
        if (dist > 0.0) lo = std::min(lo, dist);
        hi = std::max(hi, dist);
      }
    }
    const auto s = distance_stats(d);
    CHECK(std::abs(s.min_d - lo) <= 1e-12 * lo);
    CHECK(std::abs(s.max_d - hi) <= 1e-12 * hi);
  }
  SUBCASE("needs two instances") {
    Dataset d;
    d.instances.resize(1, 2);
    CHECK_THROWS_AS(distance_stats(d), InvalidInput);
  }
}

TEST_CASE("split_supervision") {
  auto labeled = [](std::size_t n) {
    Dataset d;
    d.instances = Matrix::Zero(static_cast<Eigen::Index>(n), 1);
    d.labels = std::vector<int>(n, 0);
    return d;
  };
  CHECK(supervision_size(10) == 7);
  CHECK(supervision_size(147) == 103);
  CHECK(supervision_size(5) == 4);  // 3.5 rounds up
  CHECK(supervision_size(178) == 125);

  const auto ten = split_supervision(labeled(10), 1);
  CHECK(ten.supervision.size() == 7);
  CHECK(ten.leftout.size() == 3);

  const auto iris = testing::load_labeled("iris.csv");
  const auto s = split_supervision(iris, 99);
  CHECK(s.supervision.size() == 103);
  CHECK(s.leftout.size() == 44);

  const auto again = split_supervision(iris, 99);
  CHECK(s.supervision == again.supervision);
  CHECK(s.leftout == again.leftout);
  CHECK(split_supervision(iris, 100).supervision != s.supervision);

  Dataset unlabeled;
  unlabeled.instances = Matrix::Zero(4, 1);
  CHECK_THROWS_AS(split_supervision(unlabeled, 1), InvalidInput);
}

TEST_CASE("split_supervision partitions the rows for any size and seed") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 300;
    Dataset d;
    d.instances = Matrix::Zero(static_cast<Eigen::Index>(n), 1);
    d.labels = std::vector<int>(n, 0);
    const auto s = split_supervision(d, rng());
    CHECK(s.supervision.size() == supervision_size(n));
    CHECK(std::is_sorted(s.supervision.begin(), s.supervision.end()));
    CHECK(std::is_sorted(s.leftout.begin(), s.leftout.end()));
    std::vector<std::size_t> all = s.supervision;
    all.insert(all.end(), s.leftout.begin(), s.leftout.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(n);
    for (std::size_t i = 0; i < n; ++i) expect[i] = i;
    CHECK(all == expect);
  }
}

TEST_CASE("fingerprint follows content") {
  const auto a = testing::load_labeled("iris.csv");
  auto b = a;
  CHECK(fingerprint(a) == fingerprint(b));
  b.instances(0, 0) += 1e-9;
  CHECK(fingerprint(a) != fingerprint(b));
}
