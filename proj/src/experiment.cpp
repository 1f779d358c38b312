#include "nns/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <string>

#include "nns/asymptotics.hpp"
#include "nns/error.hpp"
#include "nns/rng.hpp"

namespace nns {

std::size_t ExperimentConfig::graph_k() const {
  if (const auto* kp = std::get_if<KpNns>(&strategy)) return kp->k;
  return 1;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.dim < 1 || cfg.dim > 3) throw ConfigError("d", "dimension must be 1, 2 or 3");
  if (const auto* kp = std::get_if<KpNns>(&cfg.strategy)) {
    if (kp->k == 0) throw ConfigError("k", "k must be at least 1");
    if (!(kp->p >= 0.0 && kp->p <= 1.0)) throw ConfigError("p", "p must lie in [0,1]");
  } else {
    const auto& lr = std::get<LrNns>(cfg.strategy);
    if (cfg.dim != 1) throw ConfigError("strategy", "lr-NNS requires d = 1");
    if (!(lr.left >= 0.0)) throw ConfigError("ell", "ell must be non-negative");
    if (!(lr.right >= 0.0)) throw ConfigError("r", "r must be non-negative");
    if (lr.left + lr.right > 1.0) throw ConfigError("ell", "ell + r must not exceed 1");
  }
  const std::size_t k = cfg.graph_k();
  if (cfg.n_nodes < 2 || k > cfg.n_nodes - 1)
    throw ConfigError("n_nodes", "k <= N-1 is required (k = " + std::to_string(k) +
                                     ", N = " + std::to_string(cfg.n_nodes) + ")");
  const std::size_t alpha_k = static_cast<std::size_t>(alpha(cfg.dim)) * k;
  if (cfg.n_nodes <= alpha_k + 1)
    throw ConfigError("n_nodes", "N must exceed alpha_d*k + 1 = " + std::to_string(alpha_k + 1));
  if (cfg.n_reps < 1) throw ConfigError("n_reps", "at least one replication is required");
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) throw ConfigError("lambda", "must be a positive rate");
  if (!(cfg.mu > 0.0) || !std::isfinite(cfg.mu)) throw ConfigError("mu", "must be a positive rate");
  if (cfg.event_horizon && !(*cfg.event_horizon > 0.0 && std::isfinite(*cfg.event_horizon)))
    throw ConfigError("event_horizon", "t must be positive");
}

std::vector<double> strategy_rates(const PointSet& ps, const KnnGraph& g, const Strategy& s, double lambda) {
  if (const auto* kp = std::get_if<KpNns>(&s)) return effective_rates(g, *kp, lambda);
  return effective_rates(line_neighbours(ps), std::get<LrNns>(s), lambda);
}

RoutingTable strategy_routing(const PointSet& ps, const KnnGraph& g, const Strategy& s) {
  if (const auto* kp = std::get_if<KpNns>(&s)) return routing(g, *kp);
  return routing(line_neighbours(ps), std::get<LrNns>(s));
}

Deployment deploy(const ExperimentConfig& cfg, std::size_t rep, bool parallel_graph) {
  auto points = sample_points(cfg.n_nodes, cfg.dim, derive_seed(cfg.master_seed, {stream::kPoints, rep}));
  auto graph = parallel_graph ? build_knn_graph(points, cfg.graph_k()) : build_knn_graph_serial(points, cfg.graph_k());
  auto rates = strategy_rates(points, graph, cfg.strategy, cfg.lambda);
  auto report = classify_overload(rates, cfg.mu);
  return {std::move(points), std::move(graph), std::move(rates), std::move(report)};
}

ReplicationRecord run_replication(const ExperimentConfig& cfg, std::size_t rep, bool parallel_graph) {
  const auto dep = deploy(cfg, rep, parallel_graph);
  ReplicationRecord rec;
  rec.overloaded = dep.report.overloaded_count;
  for (double rate : dep.rates) {
    const auto c = load_class(rate, cfg.lambda, cfg.mu);
    if (c == LoadClass::unchanged) ++rec.unchanged;
    if (c == LoadClass::underloaded) ++rec.underloaded;
  }
  rec.degree_counts = in_degree_counts(dep.graph, static_cast<std::size_t>(alpha(cfg.dim)) * cfg.graph_k()).q;
  if (cfg.event_horizon) {
    const auto sim = event_simulation(strategy_routing(dep.points, dep.graph, cfg.strategy), cfg.lambda,
                                      *cfg.event_horizon, derive_seed(cfg.master_seed, {stream::kArrivals, rep}));
    rec.event_max_abs_z = sim.max_abs_z();
    rec.event_arrivals = sim.total_arrivals();
    rec.event_joins = sim.total_joins();
  }
  return rec;
}

ReplicationSummary summarize(const ExperimentConfig& cfg, const std::vector<ReplicationRecord>& records) {
  ReplicationSummary s;
  s.n_nodes = cfg.n_nodes;
  s.n_reps = records.size();
  const double n = static_cast<double>(cfg.n_nodes);
  std::map<std::size_t, std::size_t> hist;
  RunningMoments unchanged, underloaded;
  std::vector<RunningMoments> degree;
  for (const auto& rec : records) {
    s.overloaded_counts.push_back(rec.overloaded);
    s.overload.push_back(static_cast<double>(rec.overloaded) / n);
    ++hist[rec.overloaded];
    unchanged.add(static_cast<double>(rec.unchanged) / n);
    underloaded.add(static_cast<double>(rec.underloaded) / n);
    if (degree.size() < rec.degree_counts.size()) degree.resize(rec.degree_counts.size());
    for (std::size_t j = 0; j < rec.degree_counts.size(); ++j)
      degree[j].add(static_cast<double>(rec.degree_counts[j]) / n);
    if (rec.event_max_abs_z) {
      if (!s.events) s.events.emplace();
      s.events->max_abs_z = std::max(s.events->max_abs_z, *rec.event_max_abs_z);
      s.events->total_arrivals += rec.event_arrivals;
      s.events->total_joins += rec.event_joins;
    }
  }
  s.moments = sample_moments(s.overload);
  s.scaled_variance = n * s.moments.variance;
  s.histogram.assign(hist.begin(), hist.end());
  for (const auto& m : degree) {
    s.mean_degree_fraction.push_back(m.mean());
    s.degree_fraction_stderr.push_back(std::sqrt(m.variance() / static_cast<double>(records.size())));
  }
  s.mean_unchanged_fraction = unchanged.mean();
  s.mean_underloaded_fraction = underloaded.mean();
  return s;
}

ReplicationSummary run_replications(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<ReplicationRecord> records(cfg.n_reps);
  std::exception_ptr failure;
  bool failed = false;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(cfg.n_reps); ++r) {
    bool skip;
#pragma omp atomic read
    skip = failed;
    if (skip) continue;
    try {
      records[static_cast<std::size_t>(r)] = run_replication(cfg, static_cast<std::size_t>(r));
    } catch (...) {
#pragma omp critical(nns_replication_failure)
      {
        if (!failure) failure = std::current_exception();
        failed = true;
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(cfg, records);
}

ReplicationSummary run_replications_serial(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<ReplicationRecord> records;
  records.reserve(cfg.n_reps);
  for (std::size_t r = 0; r < cfg.n_reps; ++r) records.push_back(run_replication(cfg, r, false));
  return summarize(cfg, records);
}

CltDiagnostics clt_check(const ReplicationSummary& summary, std::optional<double> sigma2, double variance_tolerance) {
  if (summary.n_reps < 100) throw ValidationError("clt_check needs at least 100 replications");
  CltDiagnostics d;
  d.n_reps = summary.n_reps;
  d.scaled_variance = summary.scaled_variance;
  d.target_variance = sigma2;
  const double reps = static_cast<double>(summary.n_reps);
  d.skewness_band = 5.0 * std::sqrt(6.0 / reps);
  d.kurtosis_band = 5.0 * std::sqrt(24.0 / reps);
  if (summary.moments.variance == 0.0) {
    d.skipped = true;
    return d;
  }
  if (sigma2) {
    d.relative_error = std::abs(d.scaled_variance - *sigma2) / *sigma2;
    d.variance_ok = *d.relative_error <= variance_tolerance;
  }
  d.skewness = summary.moments.skewness;
  d.excess_kurtosis = summary.moments.excess_kurtosis;
  d.normality_ok = std::abs(d.skewness) <= d.skewness_band && std::abs(d.excess_kurtosis) <= d.kurtosis_band;
  return d;
}

SmallNResult small_n_expectation(std::size_t n_nodes, std::size_t reps, std::uint64_t seed, double p, double lambda,
                                 double mu) {
  if (n_nodes != 2 && n_nodes != 3) throw ValidationError("small_n_expectation covers N = 2 and N = 3 only");
  if (reps == 0) throw ValidationError("reps must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("p must lie in (0,1]");
  const double ratio = lambda / mu;
  if (!(ratio > 1.0 / (1.0 + p)) || rate_exceeds(lambda, mu))
    throw ValidationError("small_n_expectation requires 1/(1+p) < lambda/mu <= 1");
  std::vector<std::size_t> counts(reps);
  const KpNns strategy{1, p};
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(reps); ++r) {
    const auto ps = sample_points(n_nodes, 1, derive_seed(seed, {stream::kPoints, static_cast<std::uint64_t>(r)}));
    const auto g = build_knn_graph_serial(ps, 1);
    counts[static_cast<std::size_t>(r)] = classify_overload(effective_rates(g, strategy, lambda), mu).overloaded_count;
  }
  SmallNResult out;
  out.n_nodes = n_nodes;
  out.n_reps = reps;
  out.count_histogram.assign(n_nodes + 1, 0);
  RunningMoments m;
  for (auto c : counts) {
    ++out.count_histogram[c];
    m.add(static_cast<double>(c) / static_cast<double>(n_nodes));
  }
  out.mean = m.mean();
  out.std_error = std::sqrt(m.variance() / static_cast<double>(reps));
  return out;
}

std::vector<SpatialRow> spatial_export(const PointSet& ps, const KnnGraph& g, const LoadReport& report, double lambda) {
  if (ps.size() != g.size() || ps.size() != report.lambda_eff.size())
    throw ValidationError("point set, graph and load report describe different deployments");
  std::vector<SpatialRow> rows;
  rows.reserve(ps.size());
  for (Index i = 0; i < ps.size(); ++i) {
    const auto pt = ps.point(i);
    rows.push_back({i, std::vector<double>(pt.begin(), pt.end()), g.in_degree(i), report.lambda_eff[i],
                    load_class(report.lambda_eff[i], lambda, report.mu)});
  }
  return rows;
}

}  // namespace nns
