#include "nns/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nns/error.hpp"
#include "nns/geometry.hpp"
#include "nns/nngraph.hpp"
#include "nns/rng.hpp"
#include "nns/stats.hpp"
#include "nns/strategy.hpp"
#include "nns/union_volume.hpp"

namespace nns {

int alpha(int d) {
  switch (d) {
    case 1: return 2;
    case 2: return 5;
    case 3: return 12;
    default:
      throw ValidationError("alpha_d is only available for d in {1, 2, 3} (got d = " + std::to_string(d) + ")");
  }
}

const char* to_string(ConstantsSource s) {
  switch (s) {
    case ConstantsSource::exact: return "exact";
    case ConstantsSource::paper_table: return "paper_table";
    case ConstantsSource::mc_integral: return "mc_integral";
    case ConstantsSource::empirical: return "empirical";
  }
  return "?";
}

double ConstantsTable::sum_tolerance() const {
  switch (source) {
    case ConstantsSource::exact: return 1e-6;
    case ConstantsSource::paper_table: {
      // Printed digits: the rounding errors of the entries add up.
      double total = 0.0;
      for (double se : std_error) total += se * std::sqrt(3.0);
      return total;
    }
    default: {
      double var = 0.0;
      for (double se : std_error) var += se * se;
      return std::max(1e-9, 3.0 * std::sqrt(var));
    }
  }
}

namespace {

// Quantization error of a value printed with `digits` significant digits.
double printed_error(double value, int digits) {
  const double unit = std::pow(10.0, std::floor(std::log10(value)) - (digits - 1));
  return 0.5 * unit / std::sqrt(3.0);
}

double ball_volume_coefficient(int d) { return d == 1 ? 2.0 : std::numbers::pi; }

// Volume coordinate cut-off: exp(-kVolumeCutoff) is far below 1e-12.
constexpr double kVolumeCutoff = 80.0;
constexpr std::size_t kBatch = 4096;

double truncation_bound(int m) {
  const double md = m;
  const double a = (md + 1.0) / (2.0 * md);
  return md * std::pow(2.0 * md, md - 1.0) * std::exp(-a * kVolumeCutoff) / a;
}

struct Moments {
  double sum = 0.0, sum_sq = 0.0;
};

// One batch of importance-sampled integrand values for C^d_m.
Moments integral_batch(int d, int m, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const double rate = 1.0 / m;
  const double vcoef = ball_volume_coefficient(d);
  std::vector<double> u(static_cast<std::size_t>(m * d));
  std::vector<double> vol(static_cast<std::size_t>(m));
  std::vector<Interval> intervals(static_cast<std::size_t>(m));
  std::vector<Disk> disks(static_cast<std::size_t>(m));
  KahanSum sum, sum_sq;
  for (std::size_t s = 0; s < count; ++s) {
    bool truncated = false;
    double log_proposal = 0.0;
    for (int i = 0; i < m; ++i) {
      const double v = rng.exponential(rate);
      vol[i] = v;
      log_proposal += std::log(rate) - rate * v;
      if (v > kVolumeCutoff) truncated = true;
      if (d == 1) {
        const double r = v / vcoef;
        u[i] = (rng() >> 63) ? r : -r;
      } else {
        const double r = std::sqrt(v / vcoef);
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        u[2 * i] = r * std::cos(angle);
        u[2 * i + 1] = r * std::sin(angle);
      }
    }
    if (truncated) continue;
    // Region A: the origin is strictly nearer to each u_i than any u_j.
    bool inside = true;
    for (int i = 0; i < m && inside; ++i) {
      double ni = 0.0;
      for (int a = 0; a < d; ++a) ni += u[i * d + a] * u[i * d + a];
      for (int j = 0; j < m && inside; ++j) {
        if (j == i) continue;
        double dij = 0.0;
        for (int a = 0; a < d; ++a) {
          const double diff = u[j * d + a] - u[i * d + a];
          dij += diff * diff;
        }
        inside = ni < dij;
      }
    }
    if (!inside) continue;
    double union_volume;
    if (d == 1) {
      for (int i = 0; i < m; ++i) {
        const double r = std::abs(u[i]);
        intervals[i] = {u[i] - r, u[i] + r};
      }
      union_volume = interval_union_length(intervals);
    } else {
      for (int i = 0; i < m; ++i) {
        const double r = std::sqrt(vol[i] / vcoef);
        disks[i] = {u[2 * i], u[2 * i + 1], r};
      }
      union_volume = disk_union_area(disks);
    }
    const double w = std::exp(-union_volume - log_proposal);
    sum.add(w);
    sum_sq.add(w * w);
  }
  return {sum.value(), sum_sq.value()};
}

Estimate integrate(int d, int m, std::size_t n_samples, std::uint64_t seed) {
  if (m == 0) return {1.0, 0.0};
  const std::size_t batches = (n_samples + kBatch - 1) / kBatch;
  std::vector<Moments> partial(batches);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(batches); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBatch;
    const std::size_t count = std::min(kBatch, n_samples - begin);
    partial[static_cast<std::size_t>(b)] =
        integral_batch(d, m, count, derive_seed(seed, {stream::kIntegral, static_cast<std::uint64_t>(m),
                                                       static_cast<std::uint64_t>(b)}));
  }
  KahanSum sum, sum_sq;
  for (const auto& p : partial) {
    sum.add(p.sum);
    sum_sq.add(p.sum_sq);
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum.value() / n;
  const double var = std::max(0.0, (sum_sq.value() / n - mean * mean) * n / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_mc_dimension(int d) {
  if (d != 1 && d != 2)
    throw ValidationError("Monte Carlo integration of the in-degree constants supports d in {1, 2} only");
}

}  // namespace

ConstantsTable known_constants(int d, std::size_t k) {
  ConstantsTable t;
  t.d = d;
  t.k = k;
  if (d == 1 && k == 1) {
    t.source = ConstantsSource::exact;
    t.q = {0.25, 0.5, 0.25};
    t.std_error = {0.0, 0.0, 0.0};
    return t;
  }
  if (d == 2 && k == 1) {
    t.source = ConstantsSource::paper_table;
    t.q = {0.284, 0.463, 0.222, 0.0304, 6.56e-4, 1.90e-7};
    for (double v : t.q) t.std_error.push_back(printed_error(v, 3));
    return t;
  }
  throw ValidationError("no closed-form or published constants for (d, k) = (" + std::to_string(d) + ", " +
                        std::to_string(k) + "); use the integral or empirical method");
}

UnionIntegrals union_integrals(int d, std::size_t n_samples, std::uint64_t seed) {
  check_mc_dimension(d);
  if (n_samples < 10000) throw ValidationError("Monte Carlo integration needs at least 10^4 samples");
  UnionIntegrals out;
  out.d = d;
  out.samples = n_samples;
  out.seed = seed;
  const int a = alpha(d);
  for (int m = 0; m <= a; ++m) {
    out.c.push_back(integrate(d, m, n_samples, seed));
    if (m > 0) out.truncation_error = std::max(out.truncation_error, truncation_bound(m));
  }
  return out;
}

ConstantsTable constants_from_integrals(const UnionIntegrals& c) {
  const int a = alpha(c.d);
  ConstantsTable t;
  t.d = c.d;
  t.k = 1;
  t.source = ConstantsSource::mc_integral;
  t.samples = c.samples;
  t.seed = c.seed;
  for (int j = 0; j <= a; ++j) {
    double value = 0.0, var = 0.0, trunc = 0.0;
    for (int i = 0; i <= a - j; ++i) {
      const double coef = ((i % 2) ? -1.0 : 1.0) / (factorial(j) * factorial(i));
      value += coef * c.c[static_cast<std::size_t>(i + j)].value;
      var += coef * coef * c.c[static_cast<std::size_t>(i + j)].std_error * c.c[static_cast<std::size_t>(i + j)].std_error;
      if (i + j > 0) trunc += std::abs(coef) * c.truncation_error;
    }
    t.q.push_back(value);
    t.std_error.push_back(std::sqrt(var));
    t.truncation_error = std::max(t.truncation_error, trunc);
  }
  return t;
}

ConstantsTable mc_constants(int d, std::size_t n_samples, std::uint64_t seed) {
  return constants_from_integrals(union_integrals(d, n_samples, seed));
}

Estimate mc_constant(int d, int j, std::size_t n_samples, std::uint64_t seed) {
  check_mc_dimension(d);
  if (j < 0 || j > alpha(d)) throw ValidationError("j must lie in [0, alpha_d]");
  const auto t = mc_constants(d, n_samples, seed);
  return {t.q[static_cast<std::size_t>(j)], t.std_error[static_cast<std::size_t>(j)]};
}

ConstantsTable empirical_constants(int d, std::size_t k, std::size_t n_nodes, std::size_t n_reps,
                                   std::uint64_t seed) {
  const std::size_t alpha_k = static_cast<std::size_t>(alpha(d)) * k;
  if (n_nodes <= alpha_k + 1) throw ValidationError("n_nodes must exceed alpha_d*k + 1");
  if (n_reps < 2) throw ValidationError("empirical constants need at least two replications");
  std::vector<std::vector<double>> fractions(n_reps);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n_reps); ++r) {
    try {
      const auto ps = sample_points(n_nodes, d, derive_seed(seed, {stream::kPoints, static_cast<std::uint64_t>(r)}));
      const auto counts = in_degree_counts(build_knn_graph(ps, k), alpha_k);
      auto& f = fractions[static_cast<std::size_t>(r)];
      f.resize(alpha_k + 1);
      for (std::size_t j = 0; j <= alpha_k; ++j)
        f[j] = static_cast<double>(counts.q[j]) / static_cast<double>(n_nodes);
    } catch (...) {
#pragma omp critical(nns_empirical_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  ConstantsTable t;
  t.d = d;
  t.k = k;
  t.source = ConstantsSource::empirical;
  t.samples = n_reps;
  t.seed = seed;
  for (std::size_t j = 0; j <= alpha_k; ++j) {
    RunningMoments acc;
    for (const auto& f : fractions) acc.add(f[j]);
    t.q.push_back(acc.mean());
    t.std_error.push_back(std::sqrt(acc.variance() / static_cast<double>(n_reps)));
  }
  return t;
}

bool in_zero_overload_regime(int d, double p, double lambda, double mu) {
  // lambda (1 - p + alpha p) is the largest possible effective rate.
  return !rate_exceeds(lambda * (1.0 - p + alpha(d) * p), mu);
}

double limit_overload(int d, std::size_t k, double p, double lambda, double mu, const ConstantsTable& table) {
  if (table.d != d || table.k != k) throw ValidationError("constants table does not match (d, k)");
  const std::size_t alpha_k = static_cast<std::size_t>(alpha(d)) * k;
  if (table.q.size() != alpha_k + 1) throw ValidationError("constants table has the wrong length");
  if (!(lambda > 0.0) || !(mu > 0.0)) throw ValidationError("lambda and mu must be positive");
  if (rate_exceeds(lambda, mu)) throw ValidationError("limit_overload requires lambda <= mu");
  if (in_zero_overload_regime(d, p, lambda, mu)) return 0.0;
  const auto tf = theta_floor(k, p, lambda, mu);
  double sum = 0.0;
  for (std::size_t n = static_cast<std::size_t>(std::max<std::int64_t>(*tf + 1, 0)); n <= alpha_k; ++n) sum += table.q[n];
  return sum;
}

std::optional<double> known_variance(int d, std::size_t k) {
  if (d == 1 && k == 1) return 19.0 / 240.0;
  return std::nullopt;
}

}  // namespace nns
