#pragma once
// Dynamic simple graph on {0..n-1} with bit-packed adjacency rows, plus the
// brute-force clique and common-neighbourhood counting that the rest of the
// library treats as ground truth.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "krsim/common.hpp"
#include "krsim/simd/bit_kernels.hpp"

namespace krsim {

using simd::Word;

inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t nbits) { return (nbits + kWordBits - 1) / kWordBits; }

// Strictly increasing list of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  // Sorts the input; rejects duplicates.
  VertexSet(std::initializer_list<Vertex> members);
  explicit VertexSet(std::vector<Vertex> members);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  Vertex operator[](std::size_t i) const { return members_[i]; }
  bool contains(Vertex v) const;
  std::span<const Vertex> members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet& a, const VertexSet& b) {
    return a.members_ <=> b.members_;
  }

 private:
  std::vector<Vertex> members_;
};

// Fixed-width bitset over [0, n).
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t nbits) : nbits_(nbits), words_(words_for(nbits), 0) {}

  static Bitset from(const VertexSet& s, std::size_t nbits);

  std::size_t size() const { return nbits_; }
  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  std::uint64_t count() const;
  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }
  VertexSet to_vertex_set() const;

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  std::size_t nbits_ = 0;
  std::vector<Word> words_;
};

// Calls f(v) for each set bit of `words`, ascending.
template <class F>
void for_each_bit(std::span<const Word> words, F&& f) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    Word bits = words[w];
    while (bits != 0) {
      const int b = __builtin_ctzll(bits);
      f(static_cast<Vertex>(w * kWordBits + static_cast<std::size_t>(b)));
      bits &= bits - 1;
    }
  }
}

class Graph {
 public:
  Graph() = default;

  // K_n; rejects n = 0.
  static Graph complete(std::size_t n);
  // n isolated vertices; rejects n = 0.
  static Graph empty(std::size_t n);

  std::size_t vertex_count() const { return n_; }
  std::size_t word_count() const { return words_; }
  std::uint64_t edge_count() const { return edges_; }

  bool adjacent(Vertex u, Vertex v) const {
    return (bits_[u * words_ + v / kWordBits] >> (v % kWordBits)) & 1U;
  }
  std::span<const Word> row(Vertex v) const { return {bits_.data() + v * words_, words_}; }

  // No-ops when the edge is already in the requested state; u != v required.
  void add_edge(Vertex u, Vertex v);
  void remove_edge(Vertex u, Vertex v);

  // Sorted list of (u, v) with u < v.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  // Symmetry, irreflexivity, padding bits and edge_count bookkeeping.
  bool check_invariants() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Graph(std::size_t n, bool full);

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
  std::uint64_t edges_ = 0;
};

// Deletes the C(k,2) edges inside u. Throws std::invalid_argument when u does
// not currently induce a complete subgraph (nothing is modified in that case).
void remove_clique_edges(Graph& g, const VertexSet& u);

// Vertices adjacent to every member of u; never contains members of u.
VertexSet common_neighborhood(const Graph& g, const VertexSet& u);
Bitset common_neighborhood_bits(const Graph& g, std::span<const Vertex> u);

bool is_complete(const Graph& g, std::span<const Vertex> s);
inline bool is_complete(const Graph& g, const VertexSet& s) { return is_complete(g, s.members()); }

// Number of s-cliques whose vertices all lie in `candidates`.
std::uint64_t count_cliques_within(const Graph& g, std::span<const Word> candidates, int s);

// R_{k,U}: for |u| = m <= k-1 the number of complete (k-m)-sets inside the
// common neighbourhood of u; for |u| = k the indicator that u is complete.
std::uint64_t count_r(const Graph& g, const VertexSet& u, int k);
std::uint64_t count_r(const Graph& g, std::span<const Vertex> u, int k);

// Every K_k copy once, lexicographic. Accepts any 1 <= k <= n.
std::vector<VertexSet> enumerate_k_cliques(const Graph& g, int k);

// Enumerates s-cliques inside `candidates` in lexicographic order, calling
// visit(std::span<const Vertex>) for each. s >= 1.
class CliqueWalker {
 public:
  CliqueWalker(const Graph& g, int s);

  template <class F>
  void for_each(std::span<const Word> candidates, F&& visit);

  // The rank-th (0-based, lexicographic) s-clique inside `candidates`.
  // Precondition: rank < count_cliques_within(g, candidates, s).
  std::vector<Vertex> select(std::span<const Word> candidates, std::uint64_t rank);

 private:
  template <class F>
  void descend(int depth, std::span<const Word> cand, F& visit);
  std::span<Word> level(int depth) { return {scratch_.data() + depth * words_, words_}; }

  const Graph* g_;
  int s_;
  std::size_t words_;
  std::vector<Word> scratch_;
  std::vector<Vertex> stack_;
};

// dst = cand & row(v) restricted to vertices > v. Returns false when empty.
bool restrict_after(std::span<Word> dst, std::span<const Word> cand, std::span<const Word> row,
                    Vertex v);

template <class F>
void CliqueWalker::for_each(std::span<const Word> candidates, F&& visit) {
  stack_.clear();
  descend(0, candidates, visit);
}

template <class F>
void CliqueWalker::descend(int depth, std::span<const Word> cand, F& visit) {
  if (depth == s_ - 1) {
    for_each_bit(cand, [&](Vertex v) {
      stack_.push_back(v);
      visit(std::span<const Vertex>(stack_));
      stack_.pop_back();
    });
    return;
  }
  const std::span<Word> next = level(depth);
  for_each_bit(cand, [&](Vertex v) {
    if (!restrict_after(next, cand, g_->row(v), v)) return;
    stack_.push_back(v);
    descend(depth + 1, next, visit);
    stack_.pop_back();
  });
}

// Edge-list dump: one "u v" line per edge, u < v, sorted.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is, std::size_t n);

}  // namespace krsim
