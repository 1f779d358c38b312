#pragma once

#include <vector>

#include "nns/geometry.hpp"

namespace nns {

/// Exact k-NN index over a PointSet. The tree keeps a reference to the
/// point set, which must outlive it. Queries are const and thread-safe.
class KdTree {
 public:
  explicit KdTree(const PointSet& ps, std::size_t leaf_size = 8);

  /// k nearest points to ps.point(i), excluding i, nearest first with
  /// ties resolved by smaller index. Requires k < N.
  std::vector<Index> k_nearest(Index i, std::size_t k) const;

  /// Same, writing into `out` (resized to k) and reusing `scratch`.
  void k_nearest(Index i, std::size_t k, std::vector<Neighbour>& scratch, std::vector<Index>& out) const;

 private:
  struct Node {
    int axis = -1;       // -1 for leaves
    double split = 0.0;
    std::size_t begin = 0, end = 0;  // leaf range into order_
    std::size_t left = 0, right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end, int depth);
  void search(std::size_t node, std::span<const double> query, Index self, std::size_t k,
              std::vector<Neighbour>& best) const;

  const PointSet& ps_;
  std::size_t leaf_size_;
  std::vector<Index> order_;
  std::vector<Node> nodes_;
};

}  // namespace nns
