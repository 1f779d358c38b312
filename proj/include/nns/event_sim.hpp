#pragma once

#include <cstdint>
#include <vector>

#include "nns/geometry.hpp"
#include "nns/strategy.hpp"

namespace nns {

/// Counts from a time-ordered arrival simulation over [0, horizon].
struct EventSimResult {
  double horizon = 0.0;
  std::vector<std::uint64_t> arrivals;  // exogenous arrivals at each station
  std::vector<std::uint64_t> joins;     // customers that joined each queue
  std::vector<double> expected_rate;    // lambda_eff from the routing table

  std::uint64_t total_arrivals() const;
  std::uint64_t total_joins() const;
  std::vector<double> empirical_rate() const;
  /// (empirical - expected) / sqrt(expected / horizon); a station with
  /// expected rate 0 scores 0 when it saw no joins and +inf otherwise.
  std::vector<double> z_scores() const;
  double max_abs_z() const;
  /// Largest |empirical/expected - 1| over stations with expected >= min_rate.
  double max_relative_deviation(double min_rate) const;
};

/// Every station receives a homogeneous Poisson(lambda) arrival stream;
/// each arrival independently picks its queue from the routing table.
EventSimResult event_simulation(const RoutingTable& table, double lambda, double horizon, std::uint64_t seed);

/// Builds the routing for `s` on `ps` and simulates.
EventSimResult event_simulation(const PointSet& ps, const Strategy& s, double lambda, double horizon,
                                std::uint64_t seed);

}  // namespace nns
