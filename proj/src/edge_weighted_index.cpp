#include "krsim/edge_weighted_index.hpp"

#include <algorithm>
#include <array>

namespace krsim {

std::uint64_t EdgeWeightedIndex::estimated_bytes(std::size_t n) {
  return static_cast<std::uint64_t>(n) * (n - 1) / 2 * sizeof(std::uint64_t) +
         static_cast<std::uint64_t>(n) * (sizeof(std::uint64_t) + sizeof(std::size_t));
}

EdgeWeightedIndex EdgeWeightedIndex::build(const Graph& g, int k) {
  const std::size_t n = g.vertex_count();
  if (k < 3 || static_cast<std::size_t>(k) > n || k > kMaxK) {
    throw std::invalid_argument("EdgeWeightedIndex::build: need 3 <= k <= n (and k <= " +
                                std::to_string(kMaxK) + ")");
  }
  (void)binomial(n, static_cast<std::uint64_t>(k));  // 64-bit count guard

  EdgeWeightedIndex idx;
  idx.k_ = k;
  idx.n_ = n;
  idx.pairs_per_clique_ = static_cast<std::uint64_t>(k) * (k - 1) / 2;
  idx.row_offset_.resize(n);
  std::size_t offset = 0;
  for (std::size_t a = 0; a < n; ++a) {
    idx.row_offset_[a] = offset;
    offset += n - a - 1;
  }
  idx.weight_.assign(offset, 0);
  idx.row_total_.assign(n, 0);

  Bitset common(n);
  const auto& kern = simd::active();
  for (Vertex a = 0; a < n; ++a) {
    for_each_bit(g.row(a), [&](Vertex b) {
      if (b <= a) return;
      kern.and_into(common.words().data(), g.row(a).data(), g.row(b).data(), g.word_count());
      const std::uint64_t w = count_cliques_within(g, common.words(), k - 2);
      idx.weight_[idx.tri(a, b)] = w;
      idx.row_total_[a] += w;
      idx.total_ += w;
    });
  }
  return idx;
}

std::uint64_t EdgeWeightedIndex::pair_weight(Vertex a, Vertex b) const {
  if (a == b) return 0;
  if (a > b) std::swap(a, b);
  return weight_[tri(a, b)];
}

VertexSet EdgeWeightedIndex::sample(const Graph& g, Rng& rng) const {
  if (total_ == 0) throw ProcessTerminated();
  std::uniform_int_distribution<std::uint64_t> pick(0, total_ - 1);
  std::uint64_t r = pick(rng);

  Vertex a = 0;
  while (r >= row_total_[a]) {
    r -= row_total_[a];
    ++a;
  }
  const std::uint64_t* row = weight_.data() + row_offset_[a];
  std::size_t j = 0;
  while (r >= row[j]) {
    r -= row[j];
    ++j;
  }
  const Vertex b = static_cast<Vertex>(a + 1 + j);

  // r is now uniform over the weight(a,b) cliques through {a,b}
  Bitset common(n_);
  simd::active().and_into(common.words().data(), g.row(a).data(), g.row(b).data(), g.word_count());
  CliqueWalker walker(g, k_ - 2);
  std::vector<Vertex> members = walker.select(common.words(), r);
  members.push_back(a);
  members.push_back(b);
  return VertexSet(std::move(members));
}

RemovalDelta EdgeWeightedIndex::apply_removal(Graph& g, const VertexSet& u) {
  if (u.size() != static_cast<std::size_t>(k_) || u[u.size() - 1] >= n_ || !is_complete(g, u)) {
    throw std::invalid_argument("EdgeWeightedIndex::apply_removal: clique not in index");
  }
  RemovalDelta delta;
  delta.k = k_;

  const std::size_t words = g.word_count();
  const auto& kern = simd::active();
  Bitset in_u = Bitset::from(u, n_);
  Bitset earlier(n_);  // members of u preceding the pair's second vertex
  Bitset cand(n_);
  CliqueWalker walker(g, k_ - 2);

  std::array<Vertex, kMaxK> verts{};
  const auto drop = [&](std::span<const Vertex> rest) {
    std::size_t shared = 2;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      verts[2 + i] = rest[i];
      shared += in_u.test(rest[i]) ? 1 : 0;
    }
    ++delta.by_m[shared];
    const std::size_t size = rest.size() + 2;
    for (std::size_t p = 0; p < size; ++p) {
      for (std::size_t q = p + 1; q < size; ++q) {
        const Vertex x = std::min(verts[p], verts[q]);
        const Vertex y = std::max(verts[p], verts[q]);
        --weight_[tri(x, y)];
        --row_total_[x];
      }
    }
    total_ -= pairs_per_clique_;
  };

  // A clique K sharing >= 2 vertices with u is charged to the first two
  // members of K ∩ u, so it is visited exactly once: through pair (a,b) we
  // only extend by vertices outside {members of u smaller than b}.
  for (std::size_t j = 1; j < u.size(); ++j) {
    const Vertex b = u[j];
    earlier.set(u[j - 1]);
    for (std::size_t i = 0; i < j; ++i) {
      const Vertex a = u[i];
      verts[0] = a;
      verts[1] = b;
      kern.and_into(cand.words().data(), g.row(a).data(), g.row(b).data(), words);
      kern.andnot_into(cand.words().data(), cand.words().data(), earlier.words().data(), words);
      walker.for_each(cand.words(), drop);
    }
  }
  remove_clique_edges(g, u);
  return delta;
}

bool EdgeWeightedIndex::matches_rebuild(const Graph& g) const {
  const EdgeWeightedIndex fresh = build(g, k_);
  return fresh.weight_ == weight_ && fresh.row_total_ == row_total_ && fresh.total_ == total_;
}

}  // namespace krsim
