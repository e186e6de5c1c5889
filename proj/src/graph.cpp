#include "krsim/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace krsim {

namespace {
__extension__ typedef unsigned __int128 Wide;
}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  Wide value = 1;
  for (std::uint64_t j = 1; j <= r; ++j) {
    // C(n-r+j, j) = C(n-r+j-1, j-1) * (n-r+j) / j, exact at every step
    value = value * (n - r + j) / j;
    if (value >= (Wide{1} << 63)) {
      throw std::overflow_error("binomial coefficient C(" + std::to_string(n) + "," +
                                std::to_string(r) + ") does not fit in 63 bits");
    }
  }
  return static_cast<std::uint64_t>(value);
}

double binomial_real(double n, double r) {
  if (r < 0 || r > n) return 0.0;
  return std::exp(std::lgamma(n + 1) - std::lgamma(r + 1) - std::lgamma(n - r + 1));
}

// ---------------------------------------------------------------------------

VertexSet::VertexSet(std::initializer_list<Vertex> members)
    : VertexSet(std::vector<Vertex>(members)) {}

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw std::invalid_argument("VertexSet: duplicate vertex");
  }
}

bool VertexSet::contains(Vertex v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

Bitset Bitset::from(const VertexSet& s, std::size_t nbits) {
  Bitset b(nbits);
  for (Vertex v : s) {
    if (v >= nbits) throw std::out_of_range("Bitset::from: vertex out of range");
    b.set(v);
  }
  return b;
}

std::uint64_t Bitset::count() const {
  return simd::active().popcount(words_.data(), words_.size());
}

VertexSet Bitset::to_vertex_set() const {
  std::vector<Vertex> out;
  for_each_bit(words(), [&](Vertex v) { out.push_back(v); });
  return VertexSet(std::move(out));
}

// ---------------------------------------------------------------------------

Graph::Graph(std::size_t n, bool full) : n_(n), words_(words_for(n)), bits_(n * words_for(n), 0) {
  if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
  if (full) {
    for (std::size_t v = 0; v < n; ++v) {
      Word* row = bits_.data() + v * words_;
      for (std::size_t w = 0; w < words_; ++w) row[w] = ~Word{0};
      if (n % kWordBits != 0) row[words_ - 1] = (Word{1} << (n % kWordBits)) - 1;
      row[v / kWordBits] &= ~(Word{1} << (v % kWordBits));
    }
    edges_ = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  }
}

Graph Graph::complete(std::size_t n) { return Graph(n, true); }
Graph Graph::empty(std::size_t n) { return Graph(n, false); }

void Graph::add_edge(Vertex u, Vertex v) {
  if (u == v || u >= n_ || v >= n_) throw std::invalid_argument("add_edge: bad endpoints");
  if (adjacent(u, v)) return;
  bits_[u * words_ + v / kWordBits] |= Word{1} << (v % kWordBits);
  bits_[v * words_ + u / kWordBits] |= Word{1} << (u % kWordBits);
  ++edges_;
}

void Graph::remove_edge(Vertex u, Vertex v) {
  if (u == v || u >= n_ || v >= n_) throw std::invalid_argument("remove_edge: bad endpoints");
  if (!adjacent(u, v)) return;
  bits_[u * words_ + v / kWordBits] &= ~(Word{1} << (v % kWordBits));
  bits_[v * words_ + u / kWordBits] &= ~(Word{1} << (u % kWordBits));
  --edges_;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edges_);
  for (Vertex u = 0; u < n_; ++u) {
    for_each_bit(row(u), [&](Vertex v) {
      if (v > u) out.emplace_back(u, v);
    });
  }
  return out;
}

bool Graph::check_invariants() const {
  std::uint64_t degree_sum = 0;
  for (Vertex u = 0; u < n_; ++u) {
    const auto r = row(u);
    if (n_ % kWordBits != 0 && (r[words_ - 1] >> (n_ % kWordBits)) != 0) return false;
    if (adjacent(u, u)) return false;
    bool symmetric = true;
    for_each_bit(r, [&](Vertex v) { symmetric = symmetric && adjacent(v, u); });
    if (!symmetric) return false;
    degree_sum += simd::active().popcount(r.data(), r.size());
  }
  return degree_sum == 2 * edges_;
}

// ---------------------------------------------------------------------------

bool is_complete(const Graph& g, std::span<const Vertex> s) {
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (!g.adjacent(s[a], s[b])) return false;
    }
  }
  return true;
}

void remove_clique_edges(Graph& g, const VertexSet& u) {
  for (Vertex v : u) {
    if (v >= g.vertex_count()) throw std::invalid_argument("remove_clique_edges: vertex out of range");
  }
  if (!is_complete(g, u)) {
    throw std::invalid_argument("remove_clique_edges: vertex set is not a clique of the graph");
  }
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = a + 1; b < u.size(); ++b) g.remove_edge(u[a], u[b]);
  }
}

Bitset common_neighborhood_bits(const Graph& g, std::span<const Vertex> u) {
  if (u.empty()) throw std::invalid_argument("common_neighborhood: empty vertex set");
  Bitset out(g.vertex_count());
  auto dst = out.words();
  const auto first = g.row(u[0]);
  std::copy(first.begin(), first.end(), dst.begin());
  const auto& k = simd::active();
  for (std::size_t i = 1; i < u.size(); ++i) {
    k.and_into(dst.data(), dst.data(), g.row(u[i]).data(), dst.size());
  }
  return out;
}

VertexSet common_neighborhood(const Graph& g, const VertexSet& u) {
  return common_neighborhood_bits(g, u.members()).to_vertex_set();
}

bool restrict_after(std::span<Word> dst, std::span<const Word> cand, std::span<const Word> row,
                    Vertex v) {
  const std::size_t wv = v / kWordBits;
  std::fill(dst.begin(), dst.begin() + static_cast<std::ptrdiff_t>(wv), Word{0});
  const std::size_t tail = dst.size() - wv;
  simd::active().and_into(dst.data() + wv, cand.data() + wv, row.data() + wv, tail);
  const unsigned shift = v % kWordBits;
  dst[wv] &= shift == kWordBits - 1 ? Word{0} : (~Word{0} << (shift + 1));
  for (std::size_t w = wv; w < dst.size(); ++w) {
    if (dst[w] != 0) return true;
  }
  return false;
}

namespace {

std::uint64_t count_recursive(const Graph& g, std::span<const Word> cand, int s,
                              std::vector<Word>& scratch, int depth) {
  const auto& kern = simd::active();
  if (s == 0) return 1;
  if (s == 1) return kern.popcount(cand.data(), cand.size());
  if (s == 2) {
    // each edge inside cand is seen from both endpoints
    std::uint64_t twice = 0;
    for_each_bit(cand, [&](Vertex v) { twice += kern.and_popcount(cand.data(), g.row(v).data(), cand.size()); });
    return twice / 2;
  }
  const std::size_t words = cand.size();
  std::span<Word> next(scratch.data() + static_cast<std::size_t>(depth) * words, words);
  std::uint64_t total = 0;
  for_each_bit(cand, [&](Vertex v) {
    if (restrict_after(next, cand, g.row(v), v)) total += count_recursive(g, next, s - 1, scratch, depth + 1);
  });
  return total;
}

}  // namespace

std::uint64_t count_cliques_within(const Graph& g, std::span<const Word> candidates, int s) {
  if (s < 0) throw std::invalid_argument("count_cliques_within: negative size");
  std::vector<Word> scratch(static_cast<std::size_t>(std::max(s, 1)) * candidates.size());
  return count_recursive(g, candidates, s, scratch, 0);
}

std::uint64_t count_r(const Graph& g, std::span<const Vertex> u, int k) {
  const int m = static_cast<int>(u.size());
  if (k < 3) throw std::invalid_argument("count_r: k must be at least 3");
  if (m < 2 || m > k) throw std::invalid_argument("count_r: |U| must lie in [2, k]");
  if (m == k) return is_complete(g, u) ? 1 : 0;
  const Bitset common = common_neighborhood_bits(g, u);
  if (m == k - 1) return common.count();  // codegree
  return count_cliques_within(g, common.words(), k - m);
}

std::uint64_t count_r(const Graph& g, const VertexSet& u, int k) { return count_r(g, u.members(), k); }

std::vector<VertexSet> enumerate_k_cliques(const Graph& g, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > g.vertex_count()) {
    throw std::invalid_argument("enumerate_k_cliques: need 1 <= k <= n");
  }
  Bitset all(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) all.set(v);
  std::vector<VertexSet> out;
  CliqueWalker walker(g, k);
  walker.for_each(all.words(), [&](std::span<const Vertex> c) {
    out.emplace_back(std::vector<Vertex>(c.begin(), c.end()));
  });
  return out;
}

// ---------------------------------------------------------------------------

CliqueWalker::CliqueWalker(const Graph& g, int s)
    : g_(&g), s_(s), words_(g.word_count()),
      scratch_(static_cast<std::size_t>(std::max(s, 1)) * g.word_count()) {
  if (s < 1) throw std::invalid_argument("CliqueWalker: clique size must be positive");
  stack_.reserve(static_cast<std::size_t>(s));
}

std::vector<Vertex> CliqueWalker::select(std::span<const Word> candidates, std::uint64_t rank) {
  std::vector<Vertex> chosen;
  std::span<const Word> cand = candidates;
  const auto& kern = simd::active();
  for (int depth = 0; depth < s_; ++depth) {
    const int remaining = s_ - depth;
    bool found = false;
    if (remaining == 1) {
      for_each_bit(cand, [&](Vertex v) {
        if (found) return;
        if (rank == 0) {
          chosen.push_back(v);
          found = true;
        } else {
          --rank;
        }
      });
      if (!found) throw std::out_of_range("CliqueWalker::select: rank out of range");
      return chosen;
    }
    const std::span<Word> next = level(depth);
    Vertex pick = 0;
    for_each_bit(cand, [&](Vertex v) {
      if (found) return;
      std::uint64_t below;
      if (remaining == 2) {
        const std::size_t wv = v / kWordBits;
        const unsigned shift = v % kWordBits;
        const Word first = cand[wv] & g_->row(v)[wv] &
                           (shift == kWordBits - 1 ? Word{0} : (~Word{0} << (shift + 1)));
        below = static_cast<std::uint64_t>(std::popcount(first)) +
                kern.and_popcount(cand.data() + wv + 1, g_->row(v).data() + wv + 1,
                                  cand.size() - wv - 1);
      } else {
        below = restrict_after(next, cand, g_->row(v), v)
                    ? count_cliques_within(*g_, next, remaining - 1)
                    : 0;
      }
      if (rank < below) {
        pick = v;
        found = true;
      } else {
        rank -= below;
      }
    });
    if (!found) throw std::out_of_range("CliqueWalker::select: rank out of range");
    chosen.push_back(pick);
    restrict_after(next, cand, g_->row(pick), pick);
    cand = next;
  }
  return chosen;
}

// ---------------------------------------------------------------------------

void write_edge_list(std::ostream& os, const Graph& g) {
  for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& is, std::size_t n) {
  Graph g = Graph::empty(n);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long u = -1;
    long long v = -1;
    if (!(ls >> u >> v) || u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
        static_cast<std::size_t>(v) >= n || u == v) {
      throw std::invalid_argument("read_edge_list: malformed line '" + line + "'");
    }
    g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return g;
}

}  // namespace krsim
