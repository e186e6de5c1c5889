#pragma once
// Materialised set of all current K_k copies.
//
// Cliques live in a stable pool addressed by id. A dense array of live ids
// supports O(1) uniform sampling; removal swap-removes from it and patches the
// moved id's slot. Each unordered vertex pair {a,b} (key a*n+b, a<b) maps to
// the ids of the live cliques that contain it, which is how apply_removal
// finds every clique sharing an edge with the removed one.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "krsim/graph.hpp"
#include "krsim/removal_delta.hpp"
#include "krsim/rng.hpp"

namespace krsim {

class CliqueIndex {
 public:
  // Bytes build() would allocate for `cliques` copies of K_k (estimate).
  static std::uint64_t estimated_bytes(std::uint64_t cliques, int k);

  // Requires 3 <= k <= n. Throws std::overflow_error if C(n,k) >= 2^63.
  static CliqueIndex build(const Graph& g, int k);

  int k() const { return k_; }
  std::uint64_t size() const { return live_.size(); }

  // Uniform over live cliques. Throws ProcessTerminated when empty. The graph
  // argument is unused; it keeps the signature shared with EdgeWeightedIndex.
  VertexSet sample(const Graph& g, Rng& rng) const;

  // Removes u's edges from g and every clique sharing an edge with u from the
  // index. Throws std::invalid_argument when u is not a live clique.
  RemovalDelta apply_removal(Graph& g, const VertexSet& u);

  bool contains(const VertexSet& u) const;

  // Live cliques, lexicographically sorted.
  std::vector<VertexSet> cliques() const;

  // Ids in the bucket of pair {a,b}, as clique vertex sets (sorted).
  std::vector<VertexSet> cliques_containing(Vertex a, Vertex b) const;

  // Structural self-check plus equality with a fresh build over g.
  bool matches_rebuild(const Graph& g) const;

 private:
  using Id = std::uint32_t;
  static constexpr std::uint32_t kDead = ~std::uint32_t{0};

  std::uint64_t key(Vertex a, Vertex b) const {
    return a < b ? static_cast<std::uint64_t>(a) * n_ + b : static_cast<std::uint64_t>(b) * n_ + a;
  }
  std::span<const Vertex> vertices(Id id) const {
    return {pool_.data() + static_cast<std::size_t>(id) * static_cast<std::size_t>(k_),
            static_cast<std::size_t>(k_)};
  }
  std::optional<Id> find(const VertexSet& u) const;
  void kill(Id id);

  int k_ = 0;
  std::size_t n_ = 0;
  std::vector<Vertex> pool_;           // k vertices per id, ascending
  std::vector<Id> live_;               // dense array of live ids
  std::vector<std::uint32_t> slot_;    // id -> index in live_, kDead once removed
  std::vector<std::uint64_t> stamp_;   // id -> last removal step that visited it
  std::uint64_t step_ = 0;
  std::unordered_map<std::uint64_t, std::vector<Id>> edge_to_cliques_;
};

}  // namespace krsim
