#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nns {

using Index = std::size_t;

/// N server locations in [0,1]^d, stored row-major. Immutable once built.
class PointSet {
 public:
  PointSet(int dim, std::vector<double> coords, std::uint64_t seed = 0);

  int dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dim_); }
  std::uint64_t seed() const { return seed_; }

  std::span<const double> point(Index i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double coord(Index i, int axis) const { return coords_[i * static_cast<std::size_t>(dim_) + axis]; }
  std::span<const double> coords() const { return coords_; }

 private:
  int dim_;
  std::vector<double> coords_;
  std::uint64_t seed_;
};

/// n points with i.i.d. Unif[0,1] coordinates drawn from the stream `seed`.
PointSet sample_points(std::size_t n, int d, std::uint64_t seed);

/// Squared Euclidean distance. Both k-NN routes go through this so their
/// comparisons see identical doubles.
double squared_distance(const PointSet& ps, Index a, Index b);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Neighbour ordering: by distance, then by index.
struct Neighbour {
  double dist2;
  Index index;
  friend bool operator<(const Neighbour& a, const Neighbour& b) {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
  }
};

/// The k nearest other points of i, nearest first (kd-tree search).
std::vector<Index> k_nearest(const PointSet& ps, Index i, std::size_t k);

/// Same contract as k_nearest, by sorting all N-1 distances.
std::vector<Index> brute_force_knn(const PointSet& ps, Index i, std::size_t k);

}  // namespace nns
