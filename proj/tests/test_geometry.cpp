#include <doctest.h>

#include <cmath>

#include "nns/error.hpp"
#include "nns/geometry.hpp"
#include "nns/kdtree.hpp"
#include "nns/rng.hpp"

using namespace nns;

namespace {
PointSet line(std::vector<double> xs) { return PointSet(1, std::move(xs)); }
}  // namespace

TEST_CASE("sample_points") {
  SUBCASE("range") {
    const auto ps = sample_points(4, 1, 42);
    CHECK(ps.size() == 4);
    for (double c : ps.coords()) CHECK((c >= 0.0 && c <= 1.0));
  }
  SUBCASE("deterministic in the seed") {
    const auto a = sample_points(1000, 2, 7);
    const auto b = sample_points(1000, 2, 7);
    CHECK(std::equal(a.coords().begin(), a.coords().end(), b.coords().begin()));
    CHECK(a.seed() == 7);
  }
  SUBCASE("law of large numbers") {
    const auto ps = sample_points(100000, 1, 1);
    double sum = 0;
    for (double c : ps.coords()) sum += c;
    const double se = std::sqrt(1.0 / 12.0 / 100000.0);
    CHECK(std::abs(sum / 100000.0 - 0.5) <= 5 * se);
  }
  SUBCASE("rejects empty inputs") {
    CHECK_THROWS_AS(sample_points(0, 1, 1), ValidationError);
    CHECK_THROWS_AS(sample_points(3, 0, 1), ValidationError);
    CHECK_THROWS_AS(PointSet(1, {0.5, 1.5}), ValidationError);
  }
}

TEST_CASE("k_nearest on hand instances") {
  const auto ps = line({0.1, 0.2, 0.4, 0.8});
  CHECK(k_nearest(ps, 0, 1) == std::vector<Index>{1});
  CHECK(k_nearest(ps, 3, 2) == std::vector<Index>{2, 1});
  CHECK(brute_force_knn(ps, 2, 1) == std::vector<Index>{1});
  // 0.5 vs 0.5: the smaller index wins
  const auto tie = line({0.0, 0.5, 1.0});
  CHECK(k_nearest(tie, 1, 1) == std::vector<Index>{0});
  CHECK(brute_force_knn(tie, 1, 1) == std::vector<Index>{0});
  CHECK_THROWS_AS(k_nearest(ps, 0, 4), ValidationError);
  CHECK_THROWS_AS(brute_force_knn(ps, 0, 4), ValidationError);
  CHECK_THROWS_AS(k_nearest(ps, 9, 1), ValidationError);
}

TEST_CASE("kd-tree matches the brute-force oracle") {
  SUBCASE("N = 50, d = 2, every node, k = 1..3") {
    const auto ps = sample_points(50, 2, 2024);
    const KdTree tree(ps);
    for (Index i = 0; i < ps.size(); ++i)
      for (std::size_t k = 1; k <= 3; ++k) CHECK(tree.k_nearest(i, k) == brute_force_knn(ps, i, k));
  }
  SUBCASE("random shapes, sorted output") {
    Rng gen(99);
    for (int trial = 0; trial < 300; ++trial) {
      const int d = 1 + static_cast<int>(gen.below(3));
      const std::size_t n = 2 + gen.below(120);
      const std::size_t k = 1 + gen.below(std::min<std::size_t>(n - 1, 8));
      const auto ps = sample_points(n, d, gen());
      const KdTree tree(ps, 1 + gen.below(6));
      for (Index i = 0; i < n; ++i) {
        const auto got = tree.k_nearest(i, k);
        REQUIRE(got == brute_force_knn(ps, i, k));
        for (std::size_t r = 1; r < k; ++r)
          CHECK(squared_distance(ps, i, got[r - 1]) <= squared_distance(ps, i, got[r]));
      }
    }
  }
  SUBCASE("lattice points with many exact ties and duplicates") {
    Rng gen(5);
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 1 + static_cast<int>(gen.below(3));
      const std::size_t n = 3 + gen.below(60);
      std::vector<double> coords(n * static_cast<std::size_t>(d));
      for (double& c : coords) c = 0.25 * static_cast<double>(gen.below(5));
      const PointSet ps(d, coords);
      const KdTree tree(ps, 2);
      for (Index i = 0; i < n; ++i)
        for (std::size_t k = 1; k < std::min<std::size_t>(n, 5); ++k) REQUIRE(tree.k_nearest(i, k) == brute_force_knn(ps, i, k));
    }
  }
}
