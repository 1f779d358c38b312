#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nns/event_sim.hpp"
#include "nns/geometry.hpp"
#include "nns/nngraph.hpp"
#include "nns/stats.hpp"
#include "nns/strategy.hpp"

namespace nns {

/// One replicated experiment. Defaults reproduce the reference setting:
/// 1000 stations on [0,1], 1000 deployments, (1,1)-NNS, lambda = mu = 1.
struct ExperimentConfig {
  int dim = 1;
  std::size_t n_nodes = 1000;
  std::size_t n_reps = 1000;
  Strategy strategy = KpNns{1, 1.0};
  double lambda = 1.0;
  double mu = 1.0;
  std::uint64_t master_seed = 1;
  std::optional<double> event_horizon;

  /// k of the graph whose in-degrees are tallied (1 for lr-NNS).
  std::size_t graph_k() const;
};

/// Throws ConfigError naming the first offending field.
void validate(const ExperimentConfig& cfg);

/// Everything recorded about one deployment.
struct ReplicationRecord {
  std::size_t overloaded = 0;
  std::size_t unchanged = 0;
  std::size_t underloaded = 0;
  std::vector<std::int64_t> degree_counts;
  // Present when the config enables event simulation.
  std::optional<double> event_max_abs_z;
  std::uint64_t event_arrivals = 0;
  std::uint64_t event_joins = 0;
};

/// Runs deployment `rep` of `cfg` from its derived streams.
ReplicationRecord run_replication(const ExperimentConfig& cfg, std::size_t rep, bool parallel_graph = true);

struct EventAggregate {
  double max_abs_z = 0.0;
  std::uint64_t total_arrivals = 0;
  std::uint64_t total_joins = 0;
};

struct ReplicationSummary {
  std::size_t n_nodes = 0;
  std::size_t n_reps = 0;
  std::vector<double> overload;                 // O_N per replication
  std::vector<std::size_t> overloaded_counts;   // N O_N per replication
  SampleMoments moments;                        // of O_N
  double scaled_variance = 0.0;                 // N Var(O_N)
  std::vector<std::pair<std::size_t, std::size_t>> histogram;  // (N O_N, frequency), ascending
  std::vector<double> mean_degree_fraction;     // mean Q_j / N
  std::vector<double> degree_fraction_stderr;
  double mean_unchanged_fraction = 0.0;
  double mean_underloaded_fraction = 0.0;
  std::optional<EventAggregate> events;

  double mean() const { return moments.mean; }
  double variance() const { return moments.variance; }
};

/// Replications run concurrently; the result is bit-identical for any
/// thread count because every replication owns its streams and the
/// reduction follows replication order.
ReplicationSummary run_replications(const ExperimentConfig& cfg);

/// Serial reference: one replication after another, brute-force graphs.
ReplicationSummary run_replications_serial(const ExperimentConfig& cfg);

ReplicationSummary summarize(const ExperimentConfig& cfg, const std::vector<ReplicationRecord>& records);

struct CltDiagnostics {
  std::size_t n_reps = 0;
  bool skipped = false;  // degenerate sample (zero variance)
  double scaled_variance = 0.0;
  std::optional<double> target_variance;
  std::optional<double> relative_error;
  bool variance_ok = true;
  double skewness = 0.0;
  double skewness_band = 0.0;   // 5 sqrt(6 / n)
  double excess_kurtosis = 0.0;
  double kurtosis_band = 0.0;   // 5 sqrt(24 / n)
  bool normality_ok = true;

  bool ok() const { return variance_ok && normality_ok; }
};

inline constexpr double kVarianceTolerance = 0.15;

/// Compares N Var(O_N) with sigma2 (relative tolerance) and checks the
/// standardized skewness / excess kurtosis against normal-theory bands.
CltDiagnostics clt_check(const ReplicationSummary& summary, std::optional<double> sigma2,
                         double variance_tolerance = kVarianceTolerance);

struct SmallNResult {
  std::size_t n_nodes = 0;
  std::size_t n_reps = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<std::size_t> count_histogram;  // index = number of overloaded stations
};

/// Monte Carlo E[O_N] for N in {2, 3} on the line under (1,p)-NNS with
/// 1/(1+p) < lambda/mu <= 1.
SmallNResult small_n_expectation(std::size_t n_nodes, std::size_t reps, std::uint64_t seed, double p = 1.0,
                                 double lambda = 1.0, double mu = 1.0);

struct SpatialRow {
  Index index;
  std::vector<double> coords;
  std::uint32_t in_degree;
  double lambda_eff;
  LoadClass load;
};

/// One row per station, in index order.
std::vector<SpatialRow> spatial_export(const PointSet& ps, const KnnGraph& g, const LoadReport& report,
                                       double lambda);

/// Deployment `rep` of `cfg` with its graph and load report.
struct Deployment {
  PointSet points;
  KnnGraph graph;
  std::vector<double> rates;
  LoadReport report;
};
Deployment deploy(const ExperimentConfig& cfg, std::size_t rep, bool parallel_graph = true);

/// Effective rates for any strategy on a deployment.
std::vector<double> strategy_rates(const PointSet& ps, const KnnGraph& g, const Strategy& s, double lambda);
RoutingTable strategy_routing(const PointSet& ps, const KnnGraph& g, const Strategy& s);

}  // namespace nns
