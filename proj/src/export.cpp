#include "nns/export.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "nns/error.hpp"

namespace nns {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {
void seed_header(std::ostream& os, std::uint64_t seed) { os << "# master_seed=" << seed << '\n'; }
}  // namespace

void write_points_csv(std::ostream& os, const PointSet& ps, std::uint64_t master_seed) {
  seed_header(os, master_seed);
  os << "index";
  for (int a = 1; a <= ps.dim(); ++a) os << ",x" << a;
  os << '\n';
  for (Index i = 0; i < ps.size(); ++i) {
    os << i;
    for (double c : ps.point(i)) os << ',' << format_double(c);
    os << '\n';
  }
}

PointSet read_points_csv(std::istream& is) {
  std::string line;
  std::vector<double> coords;
  int dim = 0;
  std::size_t expected = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("index", 0) == 0) continue;
    std::vector<double> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto comma = line.find(',', pos);
      const auto end = comma == std::string::npos ? line.size() : comma;
      double v = 0.0;
      const auto res = std::from_chars(line.data() + pos, line.data() + end, v);
      if (res.ec != std::errc{} || res.ptr != line.data() + end)
        throw ValidationError("malformed point row: " + line);
      fields.push_back(v);
      pos = end + 1;
    }
    if (fields.size() < 2) throw ValidationError("point row needs an index and at least one coordinate");
    if (dim == 0) dim = static_cast<int>(fields.size() - 1);
    if (static_cast<int>(fields.size() - 1) != dim) throw ValidationError("point rows differ in dimension");
    if (fields[0] != static_cast<double>(expected)) throw ValidationError("point indices must be 0, 1, 2, ... in order");
    ++expected;
    coords.insert(coords.end(), fields.begin() + 1, fields.end());
  }
  if (dim == 0) throw ValidationError("point file contains no points");
  return PointSet(dim, std::move(coords));
}

void write_edges_csv(std::ostream& os, const KnnGraph& g, std::uint64_t master_seed) {
  seed_header(os, master_seed);
  os << "src,dst,rank\n";
  for (Index i = 0; i < g.size(); ++i) {
    std::size_t rank = 1;
    for (Index j : g.out_neighbours(i)) os << i << ',' << j << ',' << rank++ << '\n';
  }
}

void write_degrees_csv(std::ostream& os, const KnnGraph& g, std::uint64_t master_seed) {
  seed_header(os, master_seed);
  os << "index,in_degree\n";
  for (Index i = 0; i < g.size(); ++i) os << i << ',' << g.in_degree(i) << '\n';
}

void write_histogram_csv(std::ostream& os, const ReplicationSummary& s, std::uint64_t master_seed) {
  seed_header(os, master_seed);
  os << "count,frequency\n";
  for (const auto& [count, freq] : s.histogram) os << count << ',' << freq << '\n';
}

void write_spatial_csv(std::ostream& os, const std::vector<SpatialRow>& rows, double mu, std::uint64_t master_seed) {
  seed_header(os, master_seed);
  os << "index";
  const std::size_t dim = rows.empty() ? 0 : rows.front().coords.size();
  for (std::size_t a = 1; a <= dim; ++a) os << ",x" << a;
  os << ",in_degree,lambda_eff,rho,class\n";
  for (const auto& row : rows) {
    os << row.index;
    for (double c : row.coords) os << ',' << format_double(c);
    os << ',' << row.in_degree << ',' << format_double(row.lambda_eff) << ',' << format_double(row.lambda_eff / mu)
       << ',' << to_string(row.load) << '\n';
  }
}

void write_rates_csv(std::ostream& os, const EventSimResult& r, std::uint64_t master_seed) {
  seed_header(os, master_seed);
  os << "index,arrivals,joins,empirical_rate,lambda_eff,z\n";
  const auto emp = r.empirical_rate();
  const auto z = r.z_scores();
  for (Index i = 0; i < r.joins.size(); ++i)
    os << i << ',' << r.arrivals[i] << ',' << r.joins[i] << ',' << format_double(emp[i]) << ','
       << format_double(r.expected_rate[i]) << ',' << format_double(z[i]) << '\n';
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["d"] = cfg.dim;
  j["n_nodes"] = cfg.n_nodes;
  j["n_reps"] = cfg.n_reps;
  if (const auto* kp = std::get_if<KpNns>(&cfg.strategy)) {
    j["strategy"] = "kpnns";
    j["k"] = kp->k;
    j["p"] = kp->p;
  } else {
    const auto& lr = std::get<LrNns>(cfg.strategy);
    j["strategy"] = "lrnns";
    j["ell"] = lr.left;
    j["r"] = lr.right;
  }
  j["lambda"] = cfg.lambda;
  j["mu"] = cfg.mu;
  j["master_seed"] = cfg.master_seed;
  j["event_horizon"] = cfg.event_horizon ? nlohmann::json(*cfg.event_horizon) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const ReplicationSummary& s) {
  nlohmann::json j;
  j["n_nodes"] = s.n_nodes;
  j["n_reps"] = s.n_reps;
  j["mean"] = s.moments.mean;
  j["variance"] = s.moments.variance;
  j["scaled_variance"] = s.scaled_variance;
  j["skewness"] = s.moments.skewness;
  j["excess_kurtosis"] = s.moments.excess_kurtosis;
  j["mean_degree_fraction"] = s.mean_degree_fraction;
  j["degree_fraction_stderr"] = s.degree_fraction_stderr;
  j["mean_unchanged_fraction"] = s.mean_unchanged_fraction;
  j["mean_underloaded_fraction"] = s.mean_underloaded_fraction;
  if (s.events) {
    j["events"] = {{"max_abs_z", s.events->max_abs_z},
                   {"total_arrivals", s.events->total_arrivals},
                   {"total_joins", s.events->total_joins}};
  }
  return j;
}

nlohmann::json to_json(const CltDiagnostics& d) {
  nlohmann::json j;
  j["n_reps"] = d.n_reps;
  j["skipped"] = d.skipped;
  j["scaled_variance"] = d.scaled_variance;
  j["target_variance"] = d.target_variance ? nlohmann::json(*d.target_variance) : nlohmann::json(nullptr);
  j["relative_error"] = d.relative_error ? nlohmann::json(*d.relative_error) : nlohmann::json(nullptr);
  j["variance_ok"] = d.variance_ok;
  j["skewness"] = d.skewness;
  j["skewness_band"] = d.skewness_band;
  j["excess_kurtosis"] = d.excess_kurtosis;
  j["kurtosis_band"] = d.kurtosis_band;
  j["normality_ok"] = d.normality_ok;
  return j;
}

nlohmann::json to_json(const ConstantsTable& t) {
  nlohmann::json j;
  j["d"] = t.d;
  j["k"] = t.k;
  j["source"] = to_string(t.source);
  j["q"] = t.q;
  j["stderr"] = t.std_error;
  j["samples"] = t.samples;
  j["seed"] = t.seed;
  j["truncation_error"] = t.truncation_error;
  return j;
}

namespace {

template <class T>
T field(const nlohmann::json& doc, const char* name) {
  try {
    return doc.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(name, std::string("wrong type (") + e.what() + ")");
  }
}

std::size_t count_field(const nlohmann::json& doc, const char* name) {
  const auto& v = doc.at(name);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(name, "must be a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig cfg) {
  if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  static const char* known[] = {"d", "k", "n_nodes", "n_reps", "strategy", "p", "ell", "r",
                                "lambda", "mu", "master_seed", "event_horizon", "threads"};
  for (const auto& [key, value] : doc.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || key == name;
    if (!ok) throw ConfigError(key, "unknown config field");
  }
  if (doc.contains("d")) cfg.dim = static_cast<int>(count_field(doc, "d"));
  if (doc.contains("n_nodes")) cfg.n_nodes = count_field(doc, "n_nodes");
  if (doc.contains("n_reps")) cfg.n_reps = count_field(doc, "n_reps");
  if (doc.contains("lambda")) cfg.lambda = field<double>(doc, "lambda");
  if (doc.contains("mu")) cfg.mu = field<double>(doc, "mu");
  if (doc.contains("master_seed")) {
    const auto& v = doc.at("master_seed");
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      throw ConfigError("master_seed", "must be a non-negative 64-bit integer");
    cfg.master_seed = v.get<std::uint64_t>();
  }
  if (doc.contains("event_horizon")) {
    if (doc.at("event_horizon").is_null())
      cfg.event_horizon.reset();
    else
      cfg.event_horizon = field<double>(doc, "event_horizon");
  }
  std::string kind = std::holds_alternative<KpNns>(cfg.strategy) ? "kpnns" : "lrnns";
  if (doc.contains("strategy")) kind = field<std::string>(doc, "strategy");
  if (kind == "kpnns") {
    KpNns kp = std::holds_alternative<KpNns>(cfg.strategy) ? std::get<KpNns>(cfg.strategy) : KpNns{};
    if (doc.contains("k")) kp.k = count_field(doc, "k");
    if (doc.contains("p")) kp.p = field<double>(doc, "p");
    cfg.strategy = kp;
  } else if (kind == "lrnns") {
    LrNns lr = std::holds_alternative<LrNns>(cfg.strategy) ? std::get<LrNns>(cfg.strategy) : LrNns{};
    if (doc.contains("ell")) lr.left = field<double>(doc, "ell");
    if (doc.contains("r")) lr.right = field<double>(doc, "r");
    cfg.strategy = lr;
  } else {
    throw ConfigError("strategy", "must be \"kpnns\" or \"lrnns\"");
  }
  return cfg;
}

}  // namespace nns
