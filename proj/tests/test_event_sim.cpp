#include <doctest.h>

#include <cmath>

#include "nns/error.hpp"
#include "nns/event_sim.hpp"
#include "nns/nngraph.hpp"

using namespace nns;

TEST_CASE("no shifting: every arrival joins its own queue") {
  const auto ps = sample_points(200, 2, 4);
  const auto sim = event_simulation(ps, KpNns{2, 0.0}, 1.5, 100.0, 9);
  CHECK(sim.arrivals == sim.joins);
  CHECK(sim.total_arrivals() == sim.total_joins());
}

TEST_CASE("join rates concentrate around lambda_eff") {
  const auto ps = sample_points(1000, 1, 12);
  const auto g = build_knn_graph(ps, 1);
  const auto sim = event_simulation(routing(g, KpNns{1, 1.0}), 1.0, 1000.0, 13);
  CHECK(sim.total_arrivals() == sim.total_joins());
  for (Index i = 0; i < ps.size(); ++i) {
    CHECK(sim.expected_rate[i] == static_cast<double>(g.in_degree(i)));
    const double emp = static_cast<double>(sim.joins[i]) / 1000.0;
    CHECK(std::abs(emp - sim.expected_rate[i]) <= 5 * std::sqrt(sim.expected_rate[i] / 1000.0));
  }
  // About lambda * t arrivals per station.
  const double per_station = static_cast<double>(sim.total_arrivals()) / 1000.0;
  CHECK(std::abs(per_station - 1000.0) < 5 * std::sqrt(1000.0 / 1000.0));
}

TEST_CASE("lr-NNS interior stations see lambda") {
  const auto ps = sample_points(300, 1, 5);
  const auto sim = event_simulation(ps, LrNns{0.3, 0.5}, 2.0, 500.0, 6);
  CHECK(sim.total_arrivals() == sim.total_joins());
  std::size_t interior_at_lambda = 0;
  for (Index i = 0; i < ps.size(); ++i) {
    CHECK(std::abs(sim.z_scores()[i]) <= 5.0);
    if (std::abs(sim.expected_rate[i] - 2.0) < 1e-12) ++interior_at_lambda;
  }
  CHECK(interior_at_lambda == ps.size() - 2);
}

TEST_CASE("horizon validation") {
  const auto ps = sample_points(10, 1, 1);
  CHECK_THROWS_AS(event_simulation(ps, KpNns{1, 1.0}, 1.0, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(event_simulation(ps, KpNns{1, 1.0}, 1.0, -3.0, 1), ValidationError);
}
