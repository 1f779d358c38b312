#include "nns/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nns/error.hpp"

namespace nns {

KdTree::KdTree(const PointSet& ps, std::size_t leaf_size)
    : ps_(ps), leaf_size_(std::max<std::size_t>(leaf_size, 1)), order_(ps.size()) {
  std::iota(order_.begin(), order_.end(), Index{0});
  nodes_.reserve(2 * ps.size() / leaf_size_ + 1);
  build(0, order_.size(), 0);
}

std::size_t KdTree::build(std::size_t begin, std::size_t end, int depth) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({});
  if (end - begin <= leaf_size_) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }
  const int axis = depth % ps_.dim();
  const std::size_t mid = begin + (end - begin) / 2;
  auto first = order_.begin() + static_cast<std::ptrdiff_t>(begin);
  std::nth_element(first, order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](Index a, Index b) { return ps_.coord(a, axis) < ps_.coord(b, axis); });
  // Left subtree: coord <= split; right subtree: coord >= split.
  const double split = ps_.coord(order_[mid], axis);
  const std::size_t left = build(begin, mid, depth + 1);
  const std::size_t right = build(mid, end, depth + 1);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(std::size_t node_id, std::span<const double> query, Index self, std::size_t k,
                    std::vector<Neighbour>& best) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (std::size_t pos = node.begin; pos < node.end; ++pos) {
      const Index j = order_[pos];
      if (j == self) continue;
      const Neighbour cand{squared_distance(query, ps_.point(j)), j};
      if (best.size() == k) {
        if (!(cand < best.back())) continue;
        best.pop_back();
      }
      best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
    }
    return;
  }
  const double diff = query[static_cast<std::size_t>(node.axis)] - node.split;
  const std::size_t near = diff <= 0.0 ? node.left : node.right;
  const std::size_t far = diff <= 0.0 ? node.right : node.left;
  search(near, query, self, k, best);
  // Rounding is monotone, so no point across the plane can be closer than
  // diff^2; equality must still be visited for the index tie-break.
  if (best.size() < k || diff * diff <= best.back().dist2) search(far, query, self, k, best);
}

void KdTree::k_nearest(Index i, std::size_t k, std::vector<Neighbour>& scratch,
                       std::vector<Index>& out) const {
  if (i >= ps_.size()) throw ValidationError("node index " + std::to_string(i) + " out of range");
  if (k == 0 || k >= ps_.size())
    throw ValidationError("k = " + std::to_string(k) + " requires 1 <= k <= N-1 (N = " +
                          std::to_string(ps_.size()) + ")");
  scratch.clear();
  scratch.reserve(k + 1);
  search(0, ps_.point(i), i, k, scratch);
  out.resize(k);
  for (std::size_t r = 0; r < k; ++r) out[r] = scratch[r].index;
}

std::vector<Index> KdTree::k_nearest(Index i, std::size_t k) const {
  std::vector<Neighbour> scratch;
  std::vector<Index> out;
  k_nearest(i, k, scratch, out);
  return out;
}

}  // namespace nns
