#include "nns/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nns/error.hpp"

namespace nns {

namespace {
template <class... Ts>
struct overloaded_visitor : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded_visitor(Ts...) -> overloaded_visitor<Ts...>;

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be a positive finite rate");
}
}  // namespace

void validate(const Strategy& s) {
  std::visit(overloaded_visitor{
                 [](const KpNns& kp) {
                   if (kp.k == 0) throw ValidationError("k must be at least 1");
                   if (!(kp.p >= 0.0 && kp.p <= 1.0)) throw ValidationError("p must lie in [0,1]");
                 },
                 [](const LrNns& lr) {
                   if (!(lr.left >= 0.0) || !(lr.right >= 0.0))
                     throw ValidationError("ell and r must be non-negative");
                   if (lr.left + lr.right > 1.0) throw ValidationError("ell + r must not exceed 1");
                 },
             },
             s);
}

std::string describe(const Strategy& s) {
  return std::visit(overloaded_visitor{
                        [](const KpNns& kp) {
                          return "kpnns(k=" + std::to_string(kp.k) + ", p=" + std::to_string(kp.p) + ")";
                        },
                        [](const LrNns& lr) {
                          return "lrnns(ell=" + std::to_string(lr.left) + ", r=" + std::to_string(lr.right) + ")";
                        },
                    },
                    s);
}

bool rate_exceeds(double a, double b) { return a - b > kRateTolerance * std::max(std::abs(a), std::abs(b)); }

bool rate_equal(double a, double b) { return std::abs(a - b) <= kRateTolerance * std::max(std::abs(a), std::abs(b)); }

double theta(std::size_t k, double p, double lambda, double mu) {
  check_positive(lambda, "lambda");
  check_positive(mu, "mu");
  if (k == 0) throw ValidationError("k must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0,1]");
  const double kd = static_cast<double>(k);
  if (p == 0.0) {
    if (rate_equal(lambda, mu)) return kd;
    return mu > lambda ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return kd + (kd / p) * (mu / lambda - 1.0);
}

std::optional<std::int64_t> theta_floor(std::size_t k, double p, double lambda, double mu) {
  const double t = theta(k, p, lambda, mu);
  if (std::isinf(t)) return std::nullopt;
  // lambda_eff(n) - mu = (lambda p / k)(n - theta), so the rate tolerance
  // used by classify_overload maps to this band around theta.
  const double band = kRateTolerance * mu * static_cast<double>(k) / (lambda * p);
  const double snapped = std::floor(t + band);
  return static_cast<std::int64_t>(snapped);
}

LineNeighbours line_neighbours(const PointSet& ps) {
  if (ps.dim() != 1) throw ValidationError("lr-NNS is defined on the line only (d = 1)");
  if (ps.size() < 2) throw ValidationError("lr-NNS needs at least two stations");
  const std::size_t n = ps.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double xa = ps.coord(a, 0), xb = ps.coord(b, 0);
    return xa < xb || (xa == xb && a < b);
  });
  LineNeighbours line{std::vector<std::optional<Index>>(n), std::vector<std::optional<Index>>(n)};
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0) line.left[order[r]] = order[r - 1];
    if (r + 1 < n) line.right[order[r]] = order[r + 1];
  }
  return line;
}

std::vector<double> effective_rates(const KnnGraph& g, const KpNns& s, double lambda) {
  validate(s);
  check_positive(lambda, "lambda");
  if (s.k != g.k()) throw ValidationError("strategy k does not match the graph's k");
  std::vector<double> rates(g.size());
  const double kd = static_cast<double>(s.k);
  for (Index i = 0; i < g.size(); ++i)
    rates[i] = lambda * (1.0 - s.p) + lambda * static_cast<double>(g.in_degree(i)) * s.p / kd;
  return rates;
}

std::vector<double> effective_rates(const LineNeighbours& line, const LrNns& s, double lambda) {
  validate(s);
  check_positive(lambda, "lambda");
  const std::size_t n = line.left.size();
  std::vector<double> rates(n);
  for (Index i = 0; i < n; ++i) {
    // Own customers that stay, plus rightward movers from the left
    // neighbour and leftward movers from the right neighbour.
    double keep = 1.0;
    if (line.left[i]) keep -= s.left;
    if (line.right[i]) keep -= s.right;
    double inflow = 0.0;
    if (line.left[i]) inflow += s.right;
    if (line.right[i]) inflow += s.left;
    rates[i] = lambda * (keep + inflow);
  }
  return rates;
}

RoutingTable::RoutingTable(std::vector<std::vector<Hop>> hops) : hops_(std::move(hops)) {
  for (const auto& row : hops_) {
    double total = 0.0;
    for (const auto& h : row) {
      if (h.target >= hops_.size()) throw ValidationError("routing target out of range");
      if (!(h.probability >= 0.0)) throw ValidationError("routing probability must be non-negative");
      total += h.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("routing probabilities must sum to 1");
  }
}

RoutingTable routing(const KnnGraph& g, const KpNns& s) {
  validate(s);
  if (s.k != g.k()) throw ValidationError("strategy k does not match the graph's k");
  std::vector<std::vector<Hop>> hops(g.size());
  const double share = s.p / static_cast<double>(s.k);
  for (Index i = 0; i < g.size(); ++i) {
    hops[i].push_back({i, 1.0 - s.p});
    for (Index j : g.out_neighbours(i)) hops[i].push_back({j, share});
  }
  return RoutingTable(std::move(hops));
}

RoutingTable routing(const LineNeighbours& line, const LrNns& s) {
  validate(s);
  const std::size_t n = line.left.size();
  std::vector<std::vector<Hop>> hops(n);
  for (Index i = 0; i < n; ++i) {
    double keep = 1.0;
    if (line.left[i]) {
      hops[i].push_back({*line.left[i], s.left});
      keep -= s.left;
    }
    if (line.right[i]) {
      hops[i].push_back({*line.right[i], s.right});
      keep -= s.right;
    }
    hops[i].insert(hops[i].begin(), Hop{i, keep});
  }
  return RoutingTable(std::move(hops));
}

std::vector<double> rates_from_routing(const RoutingTable& table, double lambda) {
  check_positive(lambda, "lambda");
  std::vector<double> rates(table.size(), 0.0);
  for (Index j = 0; j < table.size(); ++j)
    for (const Hop& h : table.hops(j)) rates[h.target] += lambda * h.probability;
  return rates;
}

LoadReport classify_overload(std::span<const double> rates, double mu) {
  check_positive(mu, "mu");
  LoadReport report;
  report.mu = mu;
  report.lambda_eff.assign(rates.begin(), rates.end());
  report.rho.resize(rates.size());
  report.overloaded.resize(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    report.rho[i] = rates[i] / mu;
    report.overloaded[i] = rate_exceeds(rates[i], mu);
    if (report.overloaded[i]) ++report.overloaded_count;
  }
  report.overload_fraction =
      rates.empty() ? 0.0 : static_cast<double>(report.overloaded_count) / static_cast<double>(rates.size());
  return report;
}

const char* to_string(LoadClass c) {
  switch (c) {
    case LoadClass::overloaded: return "overloaded";
    case LoadClass::unchanged: return "unchanged";
    case LoadClass::underloaded: return "underloaded";
  }
  return "?";
}

LoadClass load_class(double lambda_eff, double lambda, double mu) {
  if (rate_exceeds(lambda_eff, mu)) return LoadClass::overloaded;
  if (rate_equal(lambda_eff, lambda)) return LoadClass::unchanged;
  return LoadClass::underloaded;
}

std::int64_t overloaded_count_via_indegree(const DegreeCounts& q, std::size_t k, double p, double lambda,
                                           double mu, std::size_t alpha_k) {
  if (q.q.size() != alpha_k + 1) throw ValidationError("degree counts do not cover j = 0..alpha_k");
  if (p == 0.0) {
    // No shifting: every station sees lambda.
    theta(k, p, lambda, mu);
    return rate_exceeds(lambda, mu) ? q.nodes() : 0;
  }
  const auto tf = theta_floor(k, p, lambda, mu);
  const std::int64_t first = std::max<std::int64_t>(*tf + 1, 0);
  std::int64_t count = 0;
  for (std::int64_t n = first; n <= static_cast<std::int64_t>(alpha_k); ++n) count += q.q[static_cast<std::size_t>(n)];
  return count;
}

double overload_via_indegree(const DegreeCounts& q, std::size_t k, double p, double lambda, double mu,
                             std::size_t alpha_k) {
  const auto count = overloaded_count_via_indegree(q, k, p, lambda, mu, alpha_k);
  return static_cast<double>(count) / static_cast<double>(q.nodes());
}

std::vector<std::int64_t> a_coefficients(std::int64_t theta_floor, std::size_t alpha_k) {
  if (theta_floor < 0 || theta_floor > static_cast<std::int64_t>(alpha_k))
    throw ValidationError("theta_floor must lie in [0, alpha_k]");
  std::vector<std::int64_t> a(alpha_k, 0);
  for (std::int64_t m = theta_floor + 1; m <= static_cast<std::int64_t>(alpha_k); ++m) {
    std::int64_t sum = 0;
    for (std::int64_t n = theta_floor + 1; n <= m; ++n) {
      const std::int64_t b = binomial(m, n);
      sum += ((m - n) % 2 == 0) ? b : -b;
    }
    a[static_cast<std::size_t>(m - 1)] = sum;
  }
  return a;
}

double overload_via_stars(const StarCounts& s, std::span<const std::int64_t> a) {
  if (a.size() != s.i_counts.size()) throw ValidationError("coefficient and star vectors differ in length");
  __int128 total = 0;
  for (std::size_t m = 0; m < a.size(); ++m) total += static_cast<__int128>(a[m]) * s.i_counts[m];
  return static_cast<double>(static_cast<std::int64_t>(total)) / static_cast<double>(s.nodes);
}

}  // namespace nns
