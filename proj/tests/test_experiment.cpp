#include <doctest.h>

#include <omp.h>

#include <cmath>

#include "nns/asymptotics.hpp"
#include "nns/error.hpp"
#include "nns/experiment.hpp"

using namespace nns;

namespace {
bool same(const ReplicationSummary& a, const ReplicationSummary& b) {
  return a.overload == b.overload && a.histogram == b.histogram && a.mean_degree_fraction == b.mean_degree_fraction &&
         a.moments.mean == b.moments.mean && a.moments.variance == b.moments.variance &&
         a.moments.skewness == b.moments.skewness && a.mean_unchanged_fraction == b.mean_unchanged_fraction;
}
}  // namespace

TEST_CASE("1D (1,1)-NNS mean overload is 1/4") {
  ExperimentConfig cfg;
  const auto s = run_replications(cfg);
  CHECK(s.n_reps == 1000);
  CHECK(std::abs(s.mean() - 0.25) <= 0.01);
  std::size_t mass = 0;
  for (const auto& [count, freq] : s.histogram) {
    CHECK(count <= cfg.n_nodes / 2);
    mass += freq;
  }
  CHECK(mass == cfg.n_reps);
}

TEST_CASE("zero-overload regime just below the threshold") {
  for (double p : {0.25, 0.5, 1.0}) {
    ExperimentConfig cfg;
    cfg.n_reps = 100;
    cfg.strategy = KpNns{1, p};
    cfg.lambda = 1.0 / (1.0 + p) - 0.01;
    const auto s = run_replications(cfg);
    for (double o : s.overload) CHECK(o == 0.0);
  }
}

TEST_CASE("lr-NNS with ell = r never overloads") {
  ExperimentConfig cfg;
  cfg.n_reps = 100;
  cfg.strategy = LrNns{0.35, 0.35};
  const auto s = run_replications(cfg);
  for (double o : s.overload) CHECK(o == 0.0);
}

TEST_CASE("lr-NNS with ell > r overloads the leftmost station at lambda = mu") {
  ExperimentConfig cfg;
  cfg.n_reps = 20;
  cfg.strategy = LrNns{0.5, 0.3};
  const auto s = run_replications(cfg);
  for (double o : s.overload) CHECK(o == 1.0 / 1000.0);
}

TEST_CASE("results do not depend on threads or on the serial reference") {
  ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.n_nodes = 300;
  cfg.n_reps = 40;
  cfg.strategy = KpNns{2, 0.6};
  cfg.event_horizon = 20.0;
  omp_set_num_threads(1);
  const auto one = run_replications(cfg);
  omp_set_num_threads(4);
  const auto four = run_replications(cfg);
  const auto serial = run_replications_serial(cfg);
  CHECK(same(one, four));
  CHECK(same(one, serial));
  REQUIRE(one.events.has_value());
  CHECK(one.events->total_arrivals == one.events->total_joins);
  CHECK(one.events->max_abs_z == four.events->max_abs_z);
}

TEST_CASE("degree fractions match empirical_constants for the same seed") {
  ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.n_reps = 100;
  cfg.master_seed = 77;
  const auto s = run_replications(cfg);
  const auto t = empirical_constants(2, 1, cfg.n_nodes, cfg.n_reps, cfg.master_seed);
  REQUIRE(s.mean_degree_fraction.size() == t.q.size());
  for (std::size_t j = 0; j < t.q.size(); ++j) CHECK(s.mean_degree_fraction[j] == doctest::Approx(t.q[j]).epsilon(1e-14));
}

TEST_CASE("config validation names the field") {
  ExperimentConfig cfg;
  cfg.n_nodes = 2;
  cfg.strategy = KpNns{2, 0.5};
  try {
    validate(cfg);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "n_nodes");
    CHECK(std::string(e.what()).find("k <= N-1") != std::string::npos);
  }
  cfg = {};
  cfg.strategy = LrNns{0.2, 0.2};
  cfg.dim = 2;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = {};
  cfg.n_nodes = 3;  // alpha_1 * 1 + 1 = 3
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = {};
  cfg.event_horizon = 0.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("clt_check") {
  ExperimentConfig cfg;
  cfg.n_reps = 1000;
  const auto s = run_replications(cfg);
  const auto d = clt_check(s, known_variance(1, 1));
  CHECK(d.relative_error.has_value());
  CHECK(d.variance_ok);
  CHECK(d.normality_ok);
  CHECK(d.skewness_band == doctest::Approx(5 * std::sqrt(6.0 / 1000)));

  cfg.lambda = 0.5;
  cfg.n_reps = 100;
  const auto zero = clt_check(run_replications(cfg), known_variance(1, 1));
  CHECK(zero.skipped);

  cfg.n_reps = 50;
  CHECK_THROWS_AS(clt_check(run_replications(cfg), std::nullopt), ValidationError);
}

TEST_CASE("small N expectations") {
  const auto two = small_n_expectation(2, 10000, 1);
  CHECK(two.mean == 0.0);
  const auto three = small_n_expectation(3, 20000, 2, 0.5, 0.9, 1.0);
  // Only 0 or 1 of three stations can overload.
  CHECK(three.count_histogram[2] == 0);
  CHECK(three.count_histogram[3] == 0);
  CHECK(std::abs(three.mean - 1.0 / 3.0) <= 5 * three.std_error);
  CHECK_THROWS_AS(small_n_expectation(4, 10, 1), ValidationError);
  CHECK_THROWS_AS(small_n_expectation(3, 10, 1, 1.0, 0.4, 1.0), ValidationError);
}

TEST_CASE("spatial export") {
  const PointSet ps(1, {0.1, 0.2, 0.4, 0.8});
  const auto g = build_knn_graph(ps, 1);
  const auto report = classify_overload(effective_rates(g, KpNns{1, 1.0}, 1.0), 1.0);
  const auto rows = spatial_export(ps, g, report, 1.0);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].load == LoadClass::unchanged);
  CHECK(rows[1].load == LoadClass::overloaded);
  CHECK(rows[2].load == LoadClass::unchanged);
  CHECK(rows[3].load == LoadClass::underloaded);
  CHECK(rows[1].in_degree == 2);

  ExperimentConfig cfg;
  cfg.dim = 2;
  const auto dep = deploy(cfg, 0);
  const auto big = spatial_export(dep.points, dep.graph, dep.report, cfg.lambda);
  CHECK(big.size() == cfg.n_nodes);
  std::size_t over = 0;
  for (const auto& r : big) over += r.load == LoadClass::overloaded;
  CHECK(over == dep.report.overloaded_count);
}
