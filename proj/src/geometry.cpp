#include "nns/geometry.hpp"

#include <algorithm>
#include <string>

#include "nns/error.hpp"
#include "nns/kdtree.hpp"
#include "nns/rng.hpp"

namespace nns {

PointSet::PointSet(int dim, std::vector<double> coords, std::uint64_t seed)
    : dim_(dim), coords_(std::move(coords)), seed_(seed) {
  if (dim_ < 1) throw ValidationError("point set dimension must be at least 1");
  if (coords_.empty() || coords_.size() % static_cast<std::size_t>(dim_) != 0)
    throw ValidationError("point set needs a positive whole number of " + std::to_string(dim_) +
                          "-dimensional points");
  for (double c : coords_)
    if (!(c >= 0.0 && c <= 1.0)) throw ValidationError("point coordinates must lie in [0,1]");
}

PointSet sample_points(std::size_t n, int d, std::uint64_t seed) {
  if (n == 0) throw ValidationError("sample_points: n must be positive");
  if (d <= 0) throw ValidationError("sample_points: d must be positive");
  Rng rng(seed);
  std::vector<double> coords(n * static_cast<std::size_t>(d));
  for (double& c : coords) c = rng.uniform();
  return PointSet(d, std::move(coords), seed);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t axis = 0; axis < a.size(); ++axis) {
    const double diff = a[axis] - b[axis];
    s += diff * diff;
  }
  return s;
}

double squared_distance(const PointSet& ps, Index a, Index b) {
  return squared_distance(ps.point(a), ps.point(b));
}

namespace {
void check_query(const PointSet& ps, Index i, std::size_t k) {
  if (i >= ps.size()) throw ValidationError("node index " + std::to_string(i) + " out of range");
  if (k == 0) throw ValidationError("k must be positive");
  if (k >= ps.size())
    throw ValidationError("k = " + std::to_string(k) + " requires k <= N-1 (N = " +
                          std::to_string(ps.size()) + ")");
}
}  // namespace

std::vector<Index> k_nearest(const PointSet& ps, Index i, std::size_t k) {
  check_query(ps, i, k);
  return KdTree(ps).k_nearest(i, k);
}

std::vector<Index> brute_force_knn(const PointSet& ps, Index i, std::size_t k) {
  check_query(ps, i, k);
  std::vector<Neighbour> all;
  all.reserve(ps.size() - 1);
  for (Index j = 0; j < ps.size(); ++j)
    if (j != i) all.push_back({squared_distance(ps, i, j), j});
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  std::vector<Index> out(k);
  for (std::size_t r = 0; r < k; ++r) out[r] = all[r].index;
  return out;
}

}  // namespace nns
