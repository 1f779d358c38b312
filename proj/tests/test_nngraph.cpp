#include <doctest.h>

#include <algorithm>

#include "nns/asymptotics.hpp"
#include "nns/error.hpp"
#include "nns/nngraph.hpp"
#include "nns/rng.hpp"

using namespace nns;

namespace {
PointSet line(std::vector<double> xs) { return PointSet(1, std::move(xs)); }
const PointSet kFour = PointSet(1, {0.1, 0.2, 0.4, 0.8});
const PointSet kPairs = PointSet(1, {0.1, 0.11, 0.5, 0.51});
}  // namespace

TEST_CASE("build_knn_graph on the four-point line") {
  const auto g = build_knn_graph(kFour, 1);
  CHECK(g.out_neighbours(0)[0] == 1);
  CHECK(g.out_neighbours(1)[0] == 0);
  CHECK(g.out_neighbours(2)[0] == 1);
  CHECK(g.out_neighbours(3)[0] == 2);
  CHECK(std::vector<std::uint32_t>(g.in_degrees().begin(), g.in_degrees().end()) ==
        std::vector<std::uint32_t>{1, 2, 1, 0});
  CHECK_THROWS_AS(build_knn_graph(kFour, 4), ValidationError);
}

TEST_CASE("parallel and serial construction agree") {
  Rng gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(gen.below(3));
    const std::size_t k = 1 + gen.below(3);
    const auto ps = sample_points(40 + gen.below(200), d, gen());
    const auto a = build_knn_graph(ps, k);
    const auto b = build_knn_graph_serial(ps, k);
    for (Index i = 0; i < ps.size(); ++i) {
      REQUIRE(a.out_neighbours(i).size() == k);
      REQUIRE(std::equal(a.out_neighbours(i).begin(), a.out_neighbours(i).end(), b.out_neighbours(i).begin()));
    }
  }
}

TEST_CASE("1D 1-NN in-degree never exceeds 2") {
  const auto g = build_knn_graph(sample_points(1000, 1, 3), 1);
  CHECK(g.max_in_degree() <= 2);
}

TEST_CASE("coincident points trip the alpha_d*k bound") {
  CHECK_THROWS_AS(build_knn_graph(line({0.5, 0.5, 0.5, 0.5, 0.9}), 1), InvariantError);
}

TEST_CASE("in-degree and star counts") {
  const auto g = build_knn_graph(kFour, 1);
  const auto q = in_degree_counts(g, 2);
  CHECK(q.q == std::vector<std::int64_t>{1, 2, 1});
  const auto s = star_counts(g, 2);
  CHECK(s[1] == 4);
  CHECK(s[2] == 1);

  const auto pairs = build_knn_graph(kPairs, 1);
  CHECK(in_degree_counts(pairs, 2).q == std::vector<std::int64_t>{0, 4, 0});
  CHECK(star_counts(pairs, 2).i_counts == std::vector<std::int64_t>{4, 0});

  CHECK_THROWS_AS(in_degree_counts(g, 1), InvariantError);
}

TEST_CASE("counts_from_stars inverts star_counts") {
  SUBCASE("hand values") {
    const auto q = counts_from_stars(StarCounts{{4, 1}, 4}, 2);
    CHECK(q.q[2] == 1);
    CHECK(q.q[1] == 2);
    CHECK(q.q[0] == 1);
  }
  SUBCASE("diagonal case") {
    const auto q = counts_from_stars(StarCounts{{50, 0, 0, 0, 0}, 60}, 5);
    CHECK(q.q[1] == 50);
    for (std::size_t j = 2; j <= 5; ++j) CHECK(q.q[j] == 0);
    CHECK(q.q[0] == 10);
  }
  SUBCASE("requires N > alpha_k + 1") {
    CHECK_THROWS_AS(counts_from_stars(StarCounts{{3, 0}, 3}, 2), ValidationError);
  }
  SUBCASE("1D N = 200 round trip") {
    const auto g = build_knn_graph(sample_points(200, 1, 77), 1);
    CHECK(counts_from_stars(star_counts(g, 2), 2) == in_degree_counts(g, 2));
  }
  SUBCASE("random graphs in d = 1..3, k = 1..3") {
    Rng gen(21);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 1 + static_cast<int>(gen.below(3));
      const std::size_t k = 1 + gen.below(3);
      const std::size_t alpha_k = static_cast<std::size_t>(alpha(d)) * k;
      const auto g = build_knn_graph(sample_points(alpha_k + 2 + gen.below(200), d, gen()), k);
      const auto s = star_counts(g, alpha_k);
      REQUIRE(s[1] == static_cast<std::int64_t>(g.size() * k));
      REQUIRE(counts_from_stars(s, alpha_k) == in_degree_counts(g, alpha_k));
    }
  }
}

TEST_CASE("mutual pairs and weak components") {
  const auto g = build_knn_graph(kFour, 1);
  CHECK(mutual_pairs(g) == std::vector<std::pair<Index, Index>>{{0, 1}});
  CHECK(weak_components(g).size() == 1);

  const auto p = build_knn_graph(kPairs, 1);
  CHECK(mutual_pairs(p) == std::vector<std::pair<Index, Index>>{{0, 1}, {2, 3}});
  const auto comps = weak_components(p);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<Index>{0, 1});
  CHECK(comps[1] == std::vector<Index>{2, 3});

  CHECK(weak_components(build_knn_graph(line({0.3, 0.7}), 1)).size() == 1);
  CHECK_THROWS_AS(mutual_pairs(build_knn_graph(kFour, 2)), ValidationError);
}

TEST_CASE("1-NN structure: a 2-cycle per component, Q0 = Q2 on the line") {
  Rng gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(gen.below(3));
    const auto g = build_knn_graph(sample_points(2 + gen.below(300), d, gen()), 1);
    const auto pairs = mutual_pairs(g);
    REQUIRE(!pairs.empty());
    const auto comps = weak_components(g);
    std::vector<std::size_t> owner(g.size());
    for (std::size_t c = 0; c < comps.size(); ++c)
      for (auto v : comps[c]) owner[v] = c;
    std::vector<int> per(comps.size(), 0);
    for (const auto& [a, b] : pairs) {
      REQUIRE(owner[a] == owner[b]);
      ++per[owner[a]];
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
      REQUIRE(comps[c].size() >= 2);
      REQUIRE(per[c] == 1);
    }
    if (d == 1) {
      const auto q = in_degree_counts(g, 2);
      REQUIRE(q.q[0] == q.q[2]);
    }
  }
}

TEST_CASE("binomial") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(36, 18) == 9075135300LL);
  CHECK(binomial(3, 4) == 0);
  CHECK_THROWS_AS(binomial(200, 100), InvariantError);
}
