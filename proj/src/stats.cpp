#include "nns/stats.hpp"

#include <cmath>

namespace nns {

void KahanSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

void RunningMoments::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

SampleMoments sample_moments(std::span<const double> xs) {
  SampleMoments out;
  out.n = xs.size();
  if (xs.empty()) return out;
  KahanSum total;
  for (double x : xs) total.add(x);
  const double n = static_cast<double>(xs.size());
  out.mean = total.value() / n;
  KahanSum s2, s3, s4;
  for (double x : xs) {
    const double c = x - out.mean;
    s2.add(c * c);
    s3.add(c * c * c);
    s4.add(c * c * c * c);
  }
  const double m2 = s2.value() / n;
  out.variance = xs.size() > 1 ? s2.value() / (n - 1.0) : 0.0;
  if (m2 > 0.0) {
    out.skewness = (s3.value() / n) / std::pow(m2, 1.5);
    out.excess_kurtosis = (s4.value() / n) / (m2 * m2) - 3.0;
  }
  return out;
}

}  // namespace nns
