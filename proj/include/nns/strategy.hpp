#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nns/geometry.hpp"
#include "nns/nngraph.hpp"

namespace nns {

/// (k,p)-NNS: stay with probability 1-p, otherwise join one of the k
/// nearest queues uniformly at random.
struct KpNns {
  std::size_t k = 1;
  double p = 1.0;
};

/// lr-NNS on the line: shift to the nearest queue on the left with
/// probability `left`, on the right with `right`, stay otherwise. At the
/// leftmost (rightmost) station only the rightward (leftward) shift exists.
struct LrNns {
  double left = 0.0;
  double right = 0.0;
};

using Strategy = std::variant<KpNns, LrNns>;

void validate(const Strategy& s);
std::string describe(const Strategy& s);

/// Relative tolerance under which two rates count as equal. Rates such as
/// lambda * (1 - p + alpha*p) land a few ulps off mu when lambda is chosen
/// at the threshold; comparisons must not flip on that noise.
inline constexpr double kRateTolerance = 1e-12;

/// a > b beyond rounding noise.
bool rate_exceeds(double a, double b);
/// |a - b| within rounding noise.
bool rate_equal(double a, double b);

/// In-degree threshold k + (k/p)(mu/lambda - 1); +inf when p = 0.
double theta(std::size_t k, double p, double lambda, double mu);

/// floor(theta), snapping values within rounding noise of an integer.
/// Returns nullopt for an infinite theta.
std::optional<std::int64_t> theta_floor(std::size_t k, double p, double lambda, double mu);

/// Left/right neighbours of every station on the line (d = 1, N >= 2).
/// Absent neighbours at the boundary are reported as nullopt.
struct LineNeighbours {
  std::vector<std::optional<Index>> left;
  std::vector<std::optional<Index>> right;
};
LineNeighbours line_neighbours(const PointSet& ps);

/// lambda(1-p) + lambda d_in(i) p / k.
std::vector<double> effective_rates(const KnnGraph& g, const KpNns& s, double lambda);
/// Closed form for lr-NNS, boundary stations included.
std::vector<double> effective_rates(const LineNeighbours& line, const LrNns& s, double lambda);

/// Per-station destination distribution of one arriving customer.
struct Hop {
  Index target;
  double probability;
};
class RoutingTable {
 public:
  explicit RoutingTable(std::vector<std::vector<Hop>> hops);
  std::size_t size() const { return hops_.size(); }
  std::span<const Hop> hops(Index i) const { return hops_[i]; }

 private:
  std::vector<std::vector<Hop>> hops_;
};

RoutingTable routing(const KnnGraph& g, const KpNns& s);
RoutingTable routing(const LineNeighbours& line, const LrNns& s);

/// lambda_eff(i) = sum_j lambda * P(customer arriving at j joins i).
std::vector<double> rates_from_routing(const RoutingTable& table, double lambda);

struct LoadReport {
  double mu = 1.0;
  std::vector<double> lambda_eff;
  std::vector<double> rho;
  std::vector<bool> overloaded;
  std::size_t overloaded_count = 0;
  double overload_fraction = 0.0;
};

/// Station i is overloaded iff lambda_eff(i) > mu strictly.
LoadReport classify_overload(std::span<const double> rates, double mu);

enum class LoadClass { overloaded, unchanged, underloaded };
const char* to_string(LoadClass c);

/// overloaded if rho > 1, unchanged if lambda_eff = lambda, else underloaded.
LoadClass load_class(double lambda_eff, double lambda, double mu);

/// O_N from the in-degree tally: (1/N) sum of q[n] over n > floor(theta).
double overload_via_indegree(const DegreeCounts& q, std::size_t k, double p, double lambda, double mu,
                             std::size_t alpha_k);

/// Integer count behind overload_via_indegree.
std::int64_t overloaded_count_via_indegree(const DegreeCounts& q, std::size_t k, double p, double lambda,
                                           double mu, std::size_t alpha_k);

/// a_m = sum_{n=theta_floor+1}^{m} (-1)^{m-n} binomial(m, n) for m = 1..alpha_k
/// (returned at index m-1).
std::vector<std::int64_t> a_coefficients(std::int64_t theta_floor, std::size_t alpha_k);

/// (1/N) sum_m a_m I_{K_m}.
double overload_via_stars(const StarCounts& s, std::span<const std::int64_t> a);

}  // namespace nns
