#include "nns/nngraph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nns/asymptotics.hpp"
#include "nns/error.hpp"
#include "nns/kdtree.hpp"

namespace nns {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw InvariantError("integer overflow in star counts");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw InvariantError("integer overflow in star counts");
  return r;
}

void check_degree_bound(const KnnGraph& g) {
  if (g.dim() > 3) return;
  const std::size_t bound = static_cast<std::size_t>(alpha(g.dim())) * g.k();
  if (g.max_in_degree() > bound)
    throw InvariantError("in-degree " + std::to_string(g.max_in_degree()) + " exceeds alpha_d*k = " +
                         std::to_string(bound) + " (coincident points?)");
}

void check_k(const PointSet& ps, std::size_t k) {
  if (k == 0 || k >= ps.size())
    throw ValidationError("k = " + std::to_string(k) + " requires 1 <= k <= N-1 (N = " +
                          std::to_string(ps.size()) + ")");
}

}  // namespace

KnnGraph::KnnGraph(int dim, std::size_t k, std::vector<Index> adjacency)
    : dim_(dim), k_(k), out_(std::move(adjacency)) {
  if (k_ == 0 || out_.size() % k_ != 0) throw ValidationError("adjacency size is not a multiple of k");
  const std::size_t n = out_.size() / k_;
  in_degree_.assign(n, 0);
  for (Index i = 0; i < n; ++i) {
    for (Index j : out_neighbours(i)) {
      if (j >= n) throw ValidationError("edge target out of range");
      if (j == i) throw InvariantError("self-loop at node " + std::to_string(i));
      ++in_degree_[j];
    }
  }
}

std::uint32_t KnnGraph::max_in_degree() const {
  return in_degree_.empty() ? 0 : *std::max_element(in_degree_.begin(), in_degree_.end());
}

KnnGraph build_knn_graph(const PointSet& ps, std::size_t k) {
  check_k(ps, k);
  const KdTree tree(ps);
  const std::size_t n = ps.size();
  std::vector<Index> out(n * k);
#pragma omp parallel
  {
    std::vector<Neighbour> scratch;
    std::vector<Index> row;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      tree.k_nearest(static_cast<Index>(i), k, scratch, row);
      std::copy(row.begin(), row.end(), out.begin() + i * static_cast<std::ptrdiff_t>(k));
    }
  }
  KnnGraph g(ps.dim(), k, std::move(out));
  check_degree_bound(g);
  return g;
}

KnnGraph build_knn_graph_serial(const PointSet& ps, std::size_t k) {
  check_k(ps, k);
  std::vector<Index> out;
  out.reserve(ps.size() * k);
  for (Index i = 0; i < ps.size(); ++i) {
    const auto row = brute_force_knn(ps, i, k);
    out.insert(out.end(), row.begin(), row.end());
  }
  KnnGraph g(ps.dim(), k, std::move(out));
  check_degree_bound(g);
  return g;
}

std::int64_t DegreeCounts::nodes() const { return std::accumulate(q.begin(), q.end(), std::int64_t{0}); }

std::int64_t binomial(std::int64_t n, std::int64_t r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    // result * (n - r + i) is divisible by i at every step.
    __int128 wide = static_cast<__int128>(result) * (n - r + i) / i;
    if (wide > INT64_MAX) throw InvariantError("binomial coefficient overflow");
    result = static_cast<std::int64_t>(wide);
  }
  return result;
}

DegreeCounts in_degree_counts(const KnnGraph& g, std::size_t alpha_k) {
  DegreeCounts counts{std::vector<std::int64_t>(alpha_k + 1, 0)};
  for (auto d : g.in_degrees()) {
    if (d > alpha_k)
      throw InvariantError("in-degree " + std::to_string(d) + " exceeds alpha_k = " + std::to_string(alpha_k));
    ++counts.q[d];
  }
  return counts;
}

StarCounts star_counts(const KnnGraph& g, std::size_t alpha_k) {
  // Tally degrees first, then weight each degree class by binomial(D, m).
  const auto q = in_degree_counts(g, alpha_k);
  StarCounts s{std::vector<std::int64_t>(alpha_k, 0), static_cast<std::int64_t>(g.size())};
  for (std::size_t m = 1; m <= alpha_k; ++m) {
    std::int64_t total = 0;
    for (std::size_t d = m; d <= alpha_k; ++d)
      total = checked_add(total, checked_mul(binomial(static_cast<std::int64_t>(d), static_cast<std::int64_t>(m)), q.q[d]));
    s.i_counts[m - 1] = total;
  }
  return s;
}

DegreeCounts counts_from_stars(const StarCounts& s, std::size_t alpha_k) {
  if (s.i_counts.size() != alpha_k) throw ValidationError("star counts do not cover m = 1..alpha_k");
  if (s.nodes <= static_cast<std::int64_t>(alpha_k) + 1)
    throw ValidationError("inversion requires N > alpha_k + 1 (N = " + std::to_string(s.nodes) +
                          ", alpha_k = " + std::to_string(alpha_k) + ")");
  DegreeCounts out{std::vector<std::int64_t>(alpha_k + 1, 0)};
  std::int64_t assigned = 0;
  for (std::size_t j = 1; j <= alpha_k; ++j) {
    std::int64_t qj = 0;
    for (std::size_t i = j; i <= alpha_k; ++i) {
      const std::int64_t term = checked_mul(binomial(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)), s[i]);
      qj = ((i - j) % 2 == 0) ? checked_add(qj, term) : checked_add(qj, -term);
    }
    out.q[j] = qj;
    assigned = checked_add(assigned, qj);
  }
  out.q[0] = s.nodes - assigned;
  return out;
}

std::vector<std::pair<Index, Index>> mutual_pairs(const KnnGraph& g) {
  if (g.k() != 1) throw ValidationError("mutual_pairs is defined for 1-NN graphs only");
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < g.size(); ++i) {
    const Index j = g.out_neighbours(i)[0];
    if (i < j && g.out_neighbours(j)[0] == i) pairs.emplace_back(i, j);
  }
  return pairs;
}

std::vector<std::vector<Index>> weak_components(const KnnGraph& g) {
  const std::size_t n = g.size();
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j : g.out_neighbours(i)) {
      const Index a = find(i), b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::vector<Index>> components;
  std::vector<std::size_t> slot(n, SIZE_MAX);
  for (Index i = 0; i < n; ++i) {
    const Index root = find(i);
    if (slot[root] == SIZE_MAX) {
      slot[root] = components.size();
      components.emplace_back();
    }
    components[slot[root]].push_back(i);
  }
  return components;
}

}  // namespace nns
