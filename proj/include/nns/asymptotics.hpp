#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace nns {

/// Largest number of points on the unit sphere of R^d with all pairwise
/// distances > 1; bounds the k-NN in-degree by alpha(d) * k.
/// Defined for d in {1, 2, 3}.
int alpha(int d);

enum class ConstantsSource { exact, paper_table, mc_integral, empirical };
const char* to_string(ConstantsSource s);

/// Limit in-degree fractions q_{d,k,j}, j = 0..alpha(d)*k.
struct ConstantsTable {
  int d = 1;
  std::size_t k = 1;
  ConstantsSource source = ConstantsSource::exact;
  std::vector<double> q;
  /// Per-entry standard error. For printed tables this is the quantization
  /// error of the printed digits (half a unit in the last place / sqrt 3).
  std::vector<double> std_error;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  /// Bound on the bias from truncating the integration domain.
  double truncation_error = 0.0;

  /// Allowed |sum(q) - 1|.
  double sum_tolerance() const;
};

/// Closed-form (d=1) or published (d=2) limits for k = 1.
ConstantsTable known_constants(int d, std::size_t k);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimates of
///   C^d_m = \int_{A^d_m} exp(-vol(B(u_1,|u_1|) u ... u B(u_m,|u_m|))) du,
///   A^d_m = {(u_1..u_m) : |u_i| < |u_j - u_i| for all i != j},
/// for m = 0..alpha(d), with C^d_0 = 1.
struct UnionIntegrals {
  int d = 1;
  std::vector<Estimate> c;
  double truncation_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Importance sampling with each u_i drawn so that vol(B(u_i,|u_i|)) is
/// exponential with rate 1/m; that keeps every weight below m^m.
/// d in {1, 2}; n_samples >= 10^4 draws per C_m.
UnionIntegrals union_integrals(int d, std::size_t n_samples, std::uint64_t seed);

/// q_{d,1,j} = (1/j!) sum_{i=0}^{alpha_d - j} (-1)^i / i! C_{i+j}.
Estimate mc_constant(int d, int j, std::size_t n_samples, std::uint64_t seed);
ConstantsTable mc_constants(int d, std::size_t n_samples, std::uint64_t seed);
/// Same combination applied to precomputed integrals.
ConstantsTable constants_from_integrals(const UnionIntegrals& c);

/// Mean of Q_{d,k,j}/N over n_reps independent deployments; replication r
/// uses the same point stream as replication r of an experiment with the
/// same master seed.
ConstantsTable empirical_constants(int d, std::size_t k, std::size_t n_nodes, std::size_t n_reps,
                                   std::uint64_t seed);

/// N -> infinity limit of O_N: 0 in the zero-overload regime, else the tail
/// sum of q over in-degrees above floor(theta). Requires lambda <= mu.
double limit_overload(int d, std::size_t k, double p, double lambda, double mu, const ConstantsTable& table);

/// True when lambda/mu <= 1/(1 - p + alpha_d p) (no station can overload).
bool in_zero_overload_regime(int d, double p, double lambda, double mu);

/// Limit of N Var(O_N); only known for (d, k) = (1, 1).
std::optional<double> known_variance(int d, std::size_t k);

}  // namespace nns
