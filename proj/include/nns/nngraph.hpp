#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nns/geometry.hpp"

namespace nns {

/// Directed k-NN graph: edge i -> j iff j is among the k nearest of i.
class KnnGraph {
 public:
  KnnGraph(int dim, std::size_t k, std::vector<Index> out_neighbours);

  int dim() const { return dim_; }
  std::size_t k() const { return k_; }
  std::size_t size() const { return in_degree_.size(); }

  /// Out-neighbours of i, nearest first.
  std::span<const Index> out_neighbours(Index i) const {
    return {out_.data() + i * k_, k_};
  }
  std::uint32_t in_degree(Index i) const { return in_degree_[i]; }
  std::span<const std::uint32_t> in_degrees() const { return in_degree_; }
  std::uint32_t max_in_degree() const;

 private:
  int dim_;
  std::size_t k_;
  std::vector<Index> out_;
  std::vector<std::uint32_t> in_degree_;
};

/// kd-tree construction, parallel over nodes. For d in {1,2,3} throws
/// InvariantError if some in-degree exceeds alpha_d * k.
KnnGraph build_knn_graph(const PointSet& ps, std::size_t k);

/// Serial brute-force reference construction.
KnnGraph build_knn_graph_serial(const PointSet& ps, std::size_t k);

/// q[j] = number of nodes with in-degree j, j = 0..alpha_k.
struct DegreeCounts {
  std::vector<std::int64_t> q;

  std::int64_t nodes() const;
  friend bool operator==(const DegreeCounts&, const DegreeCounts&) = default;
};

/// i_counts[m-1] = number of directed star subgraphs K_m, m = 1..alpha_k.
struct StarCounts {
  std::vector<std::int64_t> i_counts;
  std::int64_t nodes = 0;

  std::int64_t operator[](std::size_t m) const { return i_counts[m - 1]; }
};

DegreeCounts in_degree_counts(const KnnGraph& g, std::size_t alpha_k);

/// Each node of in-degree D contributes binomial(D, m) copies of K_m.
StarCounts star_counts(const KnnGraph& g, std::size_t alpha_k);

/// Inclusion-exclusion inverse of star_counts. Requires N > alpha_k + 1.
DegreeCounts counts_from_stars(const StarCounts& s, std::size_t alpha_k);

/// Pairs {i, j} (i < j) with i -> j and j -> i. Only for k = 1 graphs.
std::vector<std::pair<Index, Index>> mutual_pairs(const KnnGraph& g);

/// Weakly connected components, each sorted, ordered by smallest member.
std::vector<std::vector<Index>> weak_components(const KnnGraph& g);

/// Exact binomial coefficient; throws on int64 overflow.
std::int64_t binomial(std::int64_t n, std::int64_t r);

}  // namespace nns
