#pragma once
// Implicit K_k index for graphs whose clique count is too large to
// materialise.
//
// For every vertex pair {a,b} it keeps w(a,b), the number of K_k copies that
// contain the pair. Sum over pairs = C(k,2) * Q_k. Sampling draws a pair with
// probability w(a,b) / sum and then a uniform clique through that pair; a
// fixed clique is reachable through each of its C(k,2) pairs, so it is drawn
// with probability C(k,2) / sum = 1 / Q_k exactly. Memory is O(n^2).

#include <cstdint>
#include <vector>

#include "krsim/graph.hpp"
#include "krsim/removal_delta.hpp"
#include "krsim/rng.hpp"

namespace krsim {

class EdgeWeightedIndex {
 public:
  static std::uint64_t estimated_bytes(std::size_t n);

  // Requires 3 <= k <= n. Throws std::overflow_error if C(n,k) >= 2^63.
  static EdgeWeightedIndex build(const Graph& g, int k);

  int k() const { return k_; }
  std::uint64_t size() const { return total_ / pairs_per_clique_; }

  // g must be the graph the index describes. Throws ProcessTerminated when empty.
  VertexSet sample(const Graph& g, Rng& rng) const;

  // Same contract as CliqueIndex::apply_removal.
  RemovalDelta apply_removal(Graph& g, const VertexSet& u);

  // Number of live K_k copies containing the pair {a,b}.
  std::uint64_t pair_weight(Vertex a, Vertex b) const;

  bool matches_rebuild(const Graph& g) const;

 private:
  std::size_t tri(Vertex a, Vertex b) const { return row_offset_[a] + (b - a - 1); }

  int k_ = 0;
  std::size_t n_ = 0;
  std::uint64_t pairs_per_clique_ = 1;
  std::vector<std::size_t> row_offset_;
  std::vector<std::uint64_t> weight_;     // upper triangle, row-major, a < b
  std::vector<std::uint64_t> row_total_;  // row_total_[a] = sum_b weight(a,b)
  std::uint64_t total_ = 0;
};

}  // namespace krsim
