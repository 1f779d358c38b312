// nnshift: simulate and analyse nearest-neighbour-shift load balancing.
//
//   nnshift simulate        replicated O_N experiment -> summary.json, histogram.csv
//   nnshift constants       limit in-degree fractions -> constants.json
//   nnshift graph-stats     one k-NN graph            -> edges.csv, degrees.csv, graph_summary.json
//   nnshift event-sim       arrival simulation        -> rates.csv, event_summary.json
//   nnshift export-spatial  per-station classes       -> spatial*.csv
//
// Every run also writes <command>_manifest.json. Exit codes: 0 success,
// 1 runtime failure, 2 usage or validation error.

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nns/asymptotics.hpp"
#include "nns/error.hpp"
#include "nns/event_sim.hpp"
#include "nns/experiment.hpp"
#include "nns/export.hpp"
#include "nns/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

/// Options shared by the experiment-style commands. Flags that were given
/// override the config file; anything else keeps the file or the default.
struct ExperimentFlags {
  std::string config_path;
  json overrides = json::object();
  std::optional<double> horizon;
  int threads = 0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--config", config_path, "JSON config file (fields as in ExperimentConfig)");
    add(cmd, "--d", "d", "dimension (1, 2 or 3)");
    add(cmd, "--k", "k", "activity range k");
    add(cmd, "--n-nodes", "n_nodes", "number of stations N");
    add(cmd, "--reps", "n_reps", "number of replications");
    add(cmd, "--seed", "master_seed", "master seed");
    add_real(cmd, "--p", "p", "shift probability p");
    add_real(cmd, "--ell", "ell", "lr-NNS left probability");
    add_real(cmd, "--r", "r", "lr-NNS right probability");
    add_real(cmd, "--lambda", "lambda", "exogenous arrival rate");
    add_real(cmd, "--mu", "mu", "service rate");
    add_real(cmd, "--horizon", "event_horizon", "event simulation horizon t");
    cmd.add_option_function<std::string>(
        "--strategy", [this](const std::string& s) { overrides["strategy"] = s; }, "kpnns or lrnns");
    cmd.add_option("--threads", threads, "worker threads (0 = hardware default)");
  }

  nns::ExperimentConfig resolve(const nns::ExperimentConfig& defaults) const {
    json doc = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw nns::ConfigError("config", "cannot open " + config_path);
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw nns::ConfigError("config", std::string("invalid JSON: ") + e.what());
      }
      if (!doc.is_object()) throw nns::ConfigError("config", "config must be a JSON object");
    }
    doc.merge_patch(overrides);
    // CLI-only key
    doc.erase("threads");
    auto cfg = nns::config_from_json(doc, defaults);
    nns::validate(cfg);
    return cfg;
  }

  void apply_threads() const {
    if (threads < 0) throw nns::ConfigError("threads", "must be non-negative");
    if (threads > 0) omp_set_num_threads(threads);
  }

 private:
  void add(CLI::App& cmd, const char* flag, const char* key, const char* help) {
    cmd.add_option_function<std::uint64_t>(flag, [this, key](std::uint64_t v) { overrides[key] = v; }, help);
  }
  void add_real(CLI::App& cmd, const char* flag, const char* key, const char* help) {
    cmd.add_option_function<double>(flag, [this, key](double v) { overrides[key] = v; }, help);
  }
};

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NNS_OUTPUT_DIR")) return env;
  return ".";
}

class Run {
 public:
  Run(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    outputs_.push_back(path.string());
    return out;
  }

  void write_json(const std::string& name, const json& doc) { open(name) << doc.dump(2) << '\n'; }

  void finish(const json& parameters, std::uint64_t seed) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json manifest;
    manifest["command"] = command_;
    manifest["parameters"] = parameters;
    manifest["master_seed"] = seed;
    manifest["version"] = kVersion;
    manifest["outputs"] = outputs_;
    manifest["duration_seconds"] = seconds;
    std::ofstream(dir_ / (command_ + "_manifest.json"), std::ios::binary) << manifest.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path dir_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void warn_outside_theory(const nns::ExperimentConfig& cfg) {
  if (cfg.lambda > cfg.mu)
    std::cerr << "warning: lambda > mu; the in-degree threshold and limit predictions assume lambda <= mu, "
                 "only the direct overload count is meaningful\n";
}

int cmd_simulate(const ExperimentFlags& flags, const std::string& out_flag) {
  const auto cfg = flags.resolve({});
  flags.apply_threads();
  warn_outside_theory(cfg);
  Run run("simulate", output_dir(out_flag));
  const auto summary = nns::run_replications(cfg);
  const std::size_t k = cfg.graph_k();
  std::optional<nns::CltDiagnostics> clt;
  if (summary.n_reps >= 100) clt = nns::clt_check(summary, nns::known_variance(cfg.dim, k));

  json doc;
  doc["config"] = nns::to_json(cfg);
  doc["summary"] = nns::to_json(summary);
  doc["clt"] = clt ? nns::to_json(*clt) : json(nullptr);
  if (const auto* kp = std::get_if<nns::KpNns>(&cfg.strategy); kp && cfg.lambda <= cfg.mu) {
    try {
      const auto table = nns::known_constants(cfg.dim, kp->k);
      doc["limit_prediction"] = nns::limit_overload(cfg.dim, kp->k, kp->p, cfg.lambda, cfg.mu, table);
    } catch (const nns::ValidationError&) {
      doc["limit_prediction"] = nullptr;
    }
  }
  run.write_json("summary.json", doc);
  auto hist = run.open("histogram.csv");
  nns::write_histogram_csv(hist, summary, cfg.master_seed);
  hist.close();
  std::cout << "mean O_N = " << nns::format_double(summary.mean())
            << "  N*Var(O_N) = " << nns::format_double(summary.scaled_variance) << '\n';
  run.finish(nns::to_json(cfg), cfg.master_seed);
  return 0;
}

struct ConstantsFlags {
  int d = 1;
  std::size_t k = 1;
  std::string method = "table";
  std::size_t samples = 1'000'000;
  std::size_t n_nodes = 1000;
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  int threads = 0;
};

int cmd_constants(const ConstantsFlags& f, const std::string& out_flag) {
  if (f.method != "table" && f.method != "integral" && f.method != "empirical")
    throw nns::ConfigError("method", "must be table, integral or empirical");
  if (f.threads > 0) omp_set_num_threads(f.threads);
  // Validate the (d, k, method) combination before any sampling.
  if (f.d < 1 || f.d > 3) throw nns::ConfigError("d", "dimension must be 1, 2 or 3");
  if (f.method == "table" && !((f.d == 1 || f.d == 2) && f.k == 1))
    throw nns::ConfigError("method", "table constants exist only for (d, k) = (1, 1) and (2, 1)");
  if (f.method == "integral" && (f.k != 1 || f.d > 2))
    throw nns::ConfigError("method", "the integral method supports k = 1 and d in {1, 2}");
  if (f.method == "integral" && f.samples < 10000) throw nns::ConfigError("samples", "at least 10^4 samples");
  if (f.method == "empirical") {
    if (f.k == 0) throw nns::ConfigError("k", "k must be at least 1");
    if (f.n_nodes < 1000) throw nns::ConfigError("n_nodes", "empirical estimation needs n_nodes >= 1000");
    if (f.reps < 100) throw nns::ConfigError("reps", "empirical estimation needs at least 100 replications");
  }
  Run run("constants", output_dir(out_flag));
  nns::ConstantsTable table;
  if (f.method == "table")
    table = nns::known_constants(f.d, f.k);
  else if (f.method == "integral")
    table = nns::mc_constants(f.d, f.samples, f.seed);
  else
    table = nns::empirical_constants(f.d, f.k, f.n_nodes, f.reps, f.seed);
  const auto doc = nns::to_json(table);
  run.write_json("constants.json", doc);
  std::cout << doc.dump(2) << '\n';
  run.finish({{"d", f.d}, {"k", f.k}, {"method", f.method}, {"samples", f.samples}, {"n_nodes", f.n_nodes},
              {"reps", f.reps}, {"seed", f.seed}},
             f.seed);
  return 0;
}

nns::PointSet load_or_sample(const nns::ExperimentConfig& cfg, const std::string& points_path) {
  if (points_path.empty()) return nns::deploy(cfg, 0).points;
  std::ifstream in(points_path);
  if (!in) throw nns::ConfigError("points", "cannot open " + points_path);
  try {
    return nns::read_points_csv(in);
  } catch (const nns::ValidationError& e) {
    throw nns::ConfigError("points", e.what());
  }
}

// Point-file runs take N and d from the file; validate k against those.
nns::ExperimentConfig config_for_points(const ExperimentFlags& flags, const std::string& points_path,
                                        nns::PointSet* loaded) {
  if (points_path.empty()) return flags.resolve({});
  *loaded = load_or_sample({}, points_path);
  nns::ExperimentConfig defaults;
  defaults.dim = loaded->dim();
  defaults.n_nodes = loaded->size();
  auto over = flags;
  over.overrides["d"] = loaded->dim();
  over.overrides["n_nodes"] = loaded->size();
  return over.resolve(defaults);
}

int cmd_graph_stats(const ExperimentFlags& flags, const std::string& points_path, const std::string& out_flag) {
  nns::PointSet loaded(1, {0.0});
  const auto cfg = config_for_points(flags, points_path, &loaded);
  flags.apply_threads();
  Run run("graph-stats", output_dir(out_flag));
  const auto ps = points_path.empty() ? nns::deploy(cfg, 0).points : loaded;
  const std::size_t k = cfg.graph_k();
  const auto g = nns::build_knn_graph(ps, k);
  const std::size_t alpha_k = static_cast<std::size_t>(nns::alpha(ps.dim())) * k;
  const auto q = nns::in_degree_counts(g, alpha_k);
  const auto stars = nns::star_counts(g, alpha_k);
  const auto back = nns::counts_from_stars(stars, alpha_k);
  const auto components = nns::weak_components(g);

  json doc;
  doc["n_nodes"] = ps.size();
  doc["d"] = ps.dim();
  doc["k"] = k;
  doc["alpha_k"] = alpha_k;
  doc["degree_counts"] = q.q;
  doc["star_counts"] = stars.i_counts;
  doc["star_roundtrip_ok"] = back == q;
  doc["edges_equal_nk"] = stars[1] == static_cast<std::int64_t>(ps.size() * k);
  doc["max_in_degree"] = g.max_in_degree();
  doc["components"] = components.size();
  std::size_t largest = 0;
  for (const auto& c : components) largest = std::max(largest, c.size());
  doc["largest_component"] = largest;
  if (k == 1) {
    const auto pairs = nns::mutual_pairs(g);
    doc["mutual_pairs"] = pairs.size();
    // Every component of size >= 2 holds exactly one 2-cycle.
    std::vector<std::size_t> owner(ps.size());
    for (std::size_t c = 0; c < components.size(); ++c)
      for (auto v : components[c]) owner[v] = c;
    std::vector<std::size_t> per(components.size(), 0);
    for (const auto& [a, b] : pairs) ++per[owner[a]];
    bool one_each = true;
    for (std::size_t c = 0; c < components.size(); ++c)
      if (components[c].size() >= 2) one_each = one_each && per[c] == 1;
    doc["one_mutual_pair_per_component"] = one_each;
    if (ps.dim() == 1) doc["q0_equals_q2"] = q.q[0] == q.q[2];
  }
  auto edges = run.open("edges.csv");
  nns::write_edges_csv(edges, g, cfg.master_seed);
  edges.close();
  auto degrees = run.open("degrees.csv");
  nns::write_degrees_csv(degrees, g, cfg.master_seed);
  degrees.close();
  run.write_json("graph_summary.json", doc);
  std::cout << doc.dump(2) << '\n';
  auto params = nns::to_json(cfg);
  if (!points_path.empty()) params["points"] = points_path;
  run.finish(params, cfg.master_seed);
  return 0;
}

int cmd_event_sim(const ExperimentFlags& flags, const std::string& out_flag) {
  nns::ExperimentConfig defaults;
  defaults.event_horizon = 1000.0;
  const auto cfg = flags.resolve(defaults);
  flags.apply_threads();
  warn_outside_theory(cfg);
  Run run("event-sim", output_dir(out_flag));
  const auto dep = nns::deploy(cfg, 0);
  const auto sim = nns::event_simulation(nns::strategy_routing(dep.points, dep.graph, cfg.strategy), cfg.lambda,
                                         *cfg.event_horizon,
                                         nns::derive_seed(cfg.master_seed, {nns::stream::kArrivals, 0}));
  auto rates = run.open("rates.csv");
  nns::write_rates_csv(rates, sim, cfg.master_seed);
  rates.close();
  json doc;
  doc["config"] = nns::to_json(cfg);
  doc["total_arrivals"] = sim.total_arrivals();
  doc["total_joins"] = sim.total_joins();
  doc["max_abs_z"] = sim.max_abs_z();
  doc["max_relative_deviation"] = sim.max_relative_deviation(0.5);
  run.write_json("event_summary.json", doc);
  std::cout << "arrivals = " << sim.total_arrivals() << "  joins = " << sim.total_joins()
            << "  max |z| = " << nns::format_double(sim.max_abs_z())
            << "  max rel. deviation (lambda_eff >= 0.5) = " << nns::format_double(sim.max_relative_deviation(0.5))
            << '\n';
  run.finish(nns::to_json(cfg), cfg.master_seed);
  return 0;
}

int cmd_export_spatial(const ExperimentFlags& flags, const std::vector<double>& p_values, const std::string& out_flag) {
  const auto cfg = flags.resolve({});
  flags.apply_threads();
  for (double p : p_values)
    if (!(p >= 0.0 && p <= 1.0)) throw nns::ConfigError("p-values", "every p must lie in [0,1]");
  if (!p_values.empty() && !std::holds_alternative<nns::KpNns>(cfg.strategy))
    throw nns::ConfigError("p-values", "a p sweep needs the kpnns strategy");
  Run run("export-spatial", output_dir(out_flag));
  const auto dep = nns::deploy(cfg, 0);
  auto write = [&](const nns::Strategy& s, const std::string& name) {
    const auto rates = nns::strategy_rates(dep.points, dep.graph, s, cfg.lambda);
    const auto report = nns::classify_overload(rates, cfg.mu);
    auto out = run.open(name);
    nns::write_spatial_csv(out, nns::spatial_export(dep.points, dep.graph, report, cfg.lambda), cfg.mu,
                           cfg.master_seed);
    std::cout << name << ": " << report.overloaded_count << " of " << rates.size() << " overloaded\n";
  };
  if (p_values.empty()) {
    write(cfg.strategy, "spatial.csv");
  } else {
    const auto base = std::get<nns::KpNns>(cfg.strategy);
    for (double p : p_values) write(nns::KpNns{base.k, p}, "spatial_p" + nns::format_double(p) + ".csv");
  }
  auto params = nns::to_json(cfg);
  params["p_values"] = p_values;
  run.finish(params, cfg.master_seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearest-neighbour-shift load balancing: simulation, constants and graph statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string out_dir;
  app.add_option("--out-dir", out_dir, "output directory (default: $NNS_OUTPUT_DIR or .)");

  ExperimentFlags sim_flags, graph_flags, event_flags, spatial_flags;
  ConstantsFlags const_flags;
  std::string points_path;
  std::vector<double> p_values;

  auto* simulate = app.add_subcommand("simulate", "replicated overload-fraction experiment");
  sim_flags.add_to(*simulate);
  auto* constants = app.add_subcommand("constants", "limit in-degree fractions q_{d,k,j}");
  constants->add_option("--d", const_flags.d, "dimension");
  constants->add_option("--k", const_flags.k, "k");
  constants->add_option("--method", const_flags.method, "table, integral or empirical");
  constants->add_option("--samples", const_flags.samples, "Monte Carlo samples per integral");
  constants->add_option("--n-nodes", const_flags.n_nodes, "stations per replication (empirical)");
  constants->add_option("--reps", const_flags.reps, "replications (empirical)");
  constants->add_option("--seed", const_flags.seed, "master seed");
  constants->add_option("--threads", const_flags.threads, "worker threads");
  auto* graph = app.add_subcommand("graph-stats", "dump one k-NN graph and its statistics");
  graph_flags.add_to(*graph);
  graph->add_option("--points", points_path, "CSV of points (index,x1..xd) instead of sampling");
  auto* event = app.add_subcommand("event-sim", "Poisson arrival simulation validating effective rates");
  event_flags.add_to(*event);
  auto* spatial = app.add_subcommand("export-spatial", "per-station load classes for plotting");
  spatial_flags.add_to(*spatial);
  spatial->add_option("--p-values", p_values, "one output file per shift probability")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*simulate) return cmd_simulate(sim_flags, out_dir);
    if (*constants) return cmd_constants(const_flags, out_dir);
    if (*graph) return cmd_graph_stats(graph_flags, points_path, out_dir);
    if (*event) return cmd_event_sim(event_flags, out_dir);
    if (*spatial) return cmd_export_spatial(spatial_flags, p_values, out_dir);
  } catch (const nns::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
