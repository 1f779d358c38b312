#pragma once

#include <cstddef>
#include <span>

namespace nns {

/// Neumaier-compensated sum.
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Welford accumulator for mean and unbiased variance.
class RunningMoments {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SampleMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;         // unbiased
  double skewness = 0.0;         // g1 = m3 / m2^{3/2}
  double excess_kurtosis = 0.0;  // g2 = m4 / m2^2 - 3
};

/// Two-pass central moments. Skewness and kurtosis are 0 for a
/// degenerate (constant) sample.
SampleMoments sample_moments(std::span<const double> xs);

}  // namespace nns
