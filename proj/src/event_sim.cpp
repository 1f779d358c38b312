#include "nns/event_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "nns/error.hpp"
#include "nns/rng.hpp"

namespace nns {

std::uint64_t EventSimResult::total_arrivals() const {
  return std::accumulate(arrivals.begin(), arrivals.end(), std::uint64_t{0});
}

std::uint64_t EventSimResult::total_joins() const {
  return std::accumulate(joins.begin(), joins.end(), std::uint64_t{0});
}

std::vector<double> EventSimResult::empirical_rate() const {
  std::vector<double> out(joins.size());
  for (std::size_t i = 0; i < joins.size(); ++i) out[i] = static_cast<double>(joins[i]) / horizon;
  return out;
}

std::vector<double> EventSimResult::z_scores() const {
  std::vector<double> z(joins.size());
  for (std::size_t i = 0; i < joins.size(); ++i) {
    const double emp = static_cast<double>(joins[i]) / horizon;
    if (expected_rate[i] <= 0.0)
      z[i] = joins[i] == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    else
      z[i] = (emp - expected_rate[i]) / std::sqrt(expected_rate[i] / horizon);
  }
  return z;
}

double EventSimResult::max_abs_z() const {
  double worst = 0.0;
  for (double z : z_scores()) worst = std::max(worst, std::abs(z));
  return worst;
}

double EventSimResult::max_relative_deviation(double min_rate) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < joins.size(); ++i) {
    if (expected_rate[i] < min_rate || expected_rate[i] <= 0.0) continue;
    const double emp = static_cast<double>(joins[i]) / horizon;
    worst = std::max(worst, std::abs(emp / expected_rate[i] - 1.0));
  }
  return worst;
}

EventSimResult event_simulation(const RoutingTable& table, double lambda, double horizon, std::uint64_t seed) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("event horizon t must be positive");
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  const std::size_t n = table.size();
  EventSimResult result;
  result.horizon = horizon;
  result.arrivals.assign(n, 0);
  result.joins.assign(n, 0);
  result.expected_rate = rates_from_routing(table, lambda);

  Rng rng(seed);
  using Event = std::pair<double, Index>;  // (time, station)
  std::priority_queue<Event, std::vector<Event>, std::greater<>> pending;
  for (Index i = 0; i < n; ++i) pending.emplace(rng.exponential(lambda), i);
  while (!pending.empty()) {
    const auto [time, station] = pending.top();
    if (time > horizon) break;
    pending.pop();
    ++result.arrivals[station];
    const auto hops = table.hops(station);
    const double u = rng.uniform();
    double acc = 0.0;
    // Rounding can leave u above the last partial sum; fall back to the
    // last hop that can actually be chosen.
    Index target = hops.back().target;
    for (const Hop& h : hops) {
      if (h.probability > 0.0) target = h.target;
    }
    for (const Hop& h : hops) {
      acc += h.probability;
      if (u < acc) {
        target = h.target;
        break;
      }
    }
    ++result.joins[target];
    pending.emplace(time + rng.exponential(lambda), station);
  }
  return result;
}

EventSimResult event_simulation(const PointSet& ps, const Strategy& s, double lambda, double horizon,
                                std::uint64_t seed) {
  validate(s);
  if (const auto* kp = std::get_if<KpNns>(&s)) {
    const auto g = build_knn_graph(ps, kp->k);
    return event_simulation(routing(g, *kp), lambda, horizon, seed);
  }
  return event_simulation(routing(line_neighbours(ps), std::get<LrNns>(s)), lambda, horizon, seed);
}

}  // namespace nns
