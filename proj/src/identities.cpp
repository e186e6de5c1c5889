#include "krsim/identities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace krsim::oracle {

namespace {

// Calls f(subset) for every size-r subset of pool, lexicographic by position.
template <class F>
void for_each_combination(const std::vector<Vertex>& pool, std::size_t r, F&& f) {
  if (r > pool.size()) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t j = 0; j < r; ++j) idx[j] = j;
  std::vector<Vertex> cur(r);
  while (true) {
    for (std::size_t j = 0; j < r; ++j) cur[j] = pool[idx[j]];
    f(cur);
    std::size_t j = r;
    while (j > 0 && idx[j - 1] == pool.size() - r + (j - 1)) --j;
    if (j == 0) return;
    ++idx[j - 1];
    for (std::size_t l = j; l < r; ++l) idx[l] = idx[l - 1] + 1;
  }
}

bool complete_naive(const Graph& g, std::span<const Vertex> s) {
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (!g.adjacent(s[a], s[b])) return false;
    }
  }
  return true;
}

std::vector<Vertex> common_naive(const Graph& g, std::span<const Vertex> u) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    bool ok = true;
    for (Vertex x : u) ok = ok && x != v && g.adjacent(x, v);
    if (ok) out.push_back(v);
  }
  return out;
}

std::vector<Vertex> all_vertices(const Graph& g) {
  std::vector<Vertex> out(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) out[v] = v;
  return out;
}

std::uint64_t r_naive_span(const Graph& g, std::span<const Vertex> u, int k) {
  const std::size_t m = u.size();
  if (m < 2 || m > static_cast<std::size_t>(k)) throw std::invalid_argument("R needs 2 <= |U| <= k");
  if (m == static_cast<std::size_t>(k)) return complete_naive(g, u) ? 1 : 0;
  std::uint64_t count = 0;
  for_each_combination(common_naive(g, u), static_cast<std::size_t>(k) - m,
                       [&](const std::vector<Vertex>& c) { count += complete_naive(g, c) ? 1 : 0; });
  return count;
}

bool is_subset(const VertexSet& small, const VertexSet& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

VertexSet minus(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

VertexSet unite(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

std::vector<Vertex> to_vec(const VertexSet& s) { return {s.begin(), s.end()}; }

void require_clique(const Graph& g, const VertexSet& u_k, int k) {
  if (u_k.size() != static_cast<std::size_t>(k)) throw std::invalid_argument("u_k must have k vertices");
  if (!complete_naive(g, u_k.members())) throw std::invalid_argument("u_k must be complete");
}

BigInt sign(std::size_t e) { return (e % 2 == 0) ? BigInt(1) : BigInt(-1); }

void require_destroying_args(const Graph& g, const VertexSet& u_star, const VertexSet& u_c, int k) {
  const std::size_t m = u_star.size();
  if (m < 2 || m > static_cast<std::size_t>(k - 1)) throw std::invalid_argument("|u_star| must lie in [2, k-1]");
  if (u_c.size() != static_cast<std::size_t>(k) - m) throw std::invalid_argument("|u_c| must be k - |u_star|");
  if (!complete_naive(g, u_c.members())) throw std::invalid_argument("u_c must be complete");
  const auto common = common_naive(g, u_star.members());
  for (Vertex v : u_c) {
    if (!std::binary_search(common.begin(), common.end(), v)) {
      throw std::invalid_argument("u_c must lie inside the common neighbourhood of u_star");
    }
  }
}

}  // namespace

std::uint64_t r_naive(const Graph& g, const VertexSet& u, int k) { return r_naive_span(g, u.members(), k); }

std::vector<VertexSet> cliques_naive(const Graph& g, int k) {
  std::vector<VertexSet> out;
  for_each_combination(all_vertices(g), static_cast<std::size_t>(k), [&](const std::vector<Vertex>& c) {
    if (complete_naive(g, c)) out.emplace_back(c);
  });
  return out;
}

std::uint64_t q_um(const Graph& g, const VertexSet& u_k, const VertexSet& u_m, int k) {
  require_clique(g, u_k, k);
  if (!is_subset(u_m, u_k)) throw std::invalid_argument("u_m must be a subset of u_k");
  std::uint64_t count = 0;
  for (const VertexSet& c : cliques_naive(g, k)) count += intersect(c, u_k) == u_m ? 1 : 0;
  return count;
}

BigInt q_um_via_inclusion_exclusion(const Graph& g, const VertexSet& u_k, const VertexSet& u_m, int k) {
  require_clique(g, u_k, k);
  if (!is_subset(u_m, u_k)) throw std::invalid_argument("u_m must be a subset of u_k");
  if (u_m.size() < 2) throw std::invalid_argument("u_m needs at least 2 vertices");
  const auto rest = to_vec(minus(u_k, u_m));
  BigInt total = 0;
  for (std::size_t z = 0; z <= rest.size(); ++z) {
    for_each_combination(rest, z, [&](const std::vector<Vertex>& t) {
      total += sign(z) * BigInt(r_naive(g, unite(u_m, VertexSet(t)), k));
    });
  }
  return total;
}

std::uint64_t delta_q_via_q_um(const Graph& g, const VertexSet& u_k, int k) {
  require_clique(g, u_k, k);
  std::uint64_t total = 0;
  const auto members = to_vec(u_k);
  for (int m = 2; m <= k; ++m) {
    for_each_combination(members, static_cast<std::size_t>(m), [&](const std::vector<Vertex>& s) {
      total += q_um(g, u_k, VertexSet(s), k);
    });
  }
  return total;
}

BigInt delta_q_via_r(const Graph& g, const VertexSet& u_k, int k) {
  require_clique(g, u_k, k);
  const auto members = to_vec(u_k);
  BigInt total = 0;
  for (int m = 2; m <= k - 1; ++m) {
    BigInt inner = 0;
    for_each_combination(members, static_cast<std::size_t>(m),
                         [&](const std::vector<Vertex>& s) { inner += r_naive_span(g, s, k); });
    total += sign(static_cast<std::size_t>(m)) * (m - 1) * inner;
  }
  total += sign(static_cast<std::size_t>(k)) * (k - 1);
  return total;
}

std::uint64_t observed_delta_q(const Graph& g, const VertexSet& u_k, int k) {
  require_clique(g, u_k, k);
  Graph after = g;
  remove_clique_edges(after, u_k);
  return cliques_naive(g, k).size() - cliques_naive(after, k).size();
}

ExpectedDeltaQ expected_delta_q(const Graph& g, int k) {
  const auto cliques = cliques_naive(g, k);
  if (cliques.empty()) throw std::invalid_argument("expected_delta_q needs Q_k >= 1");
  const BigInt q = cliques.size();
  BigInt drops = 0;
  for (const VertexSet& c : cliques) drops += observed_delta_q(g, c, k);
  ExpectedDeltaQ out;
  out.exhaustive = -Rational(drops, q);
  Rational formula = Rational(sign(static_cast<std::size_t>(k) + 1) * (k - 1));
  for (int m = 2; m <= k - 1; ++m) {
    BigInt squares = 0;
    for (const VertexSet& s : cliques_naive(g, m)) {
      const BigInt r = r_naive(g, s, k);
      squares += r * r;
    }
    formula -= Rational(sign(static_cast<std::size_t>(m)) * (m - 1) * squares, q);
  }
  out.formula = formula;
  return out;
}

DoubleCounting double_counting(const Graph& g, int k, int m) {
  if (m < 2 || m > k - 1) throw std::invalid_argument("m must lie in [2, k-1]");
  DoubleCounting out;
  for (const VertexSet& s : cliques_naive(g, m)) {
    const BigInt r = r_naive(g, s, k);
    out.sum_r += r;
    out.sum_r_squared += r * r;
  }
  const auto cliques = cliques_naive(g, k);
  out.binom_times_q = big_binomial(k, m) * BigInt(cliques.size());
  for (const VertexSet& c : cliques) {
    for_each_combination(to_vec(c), static_cast<std::size_t>(m),
                         [&](const std::vector<Vertex>& s) { out.sum_over_cliques += r_naive_span(g, s, k); });
  }
  return out;
}

std::uint64_t relevant_edge_count(std::size_t m_star, std::size_t k) {
  const std::size_t c = k - m_star;
  return c * (c - 1) / 2 + m_star * c;
}

std::uint64_t q_destroying(const Graph& g, const VertexSet& u_star, const VertexSet& u_c, int k) {
  require_destroying_args(g, u_star, u_c, k);
  std::uint64_t count = 0;
  for (const VertexSet& c : cliques_naive(g, k)) {
    bool hit = false;
    for (Vertex a : c) {
      if (!u_c.contains(a)) continue;
      for (Vertex b : c) hit = hit || (b != a && (u_c.contains(b) || u_star.contains(b)));
    }
    count += hit ? 1 : 0;
  }
  return count;
}

DestroyingForms q_destroying_forms(const Graph& g, const VertexSet& u_star, const VertexSet& u_c, int k) {
  require_destroying_args(g, u_star, u_c, k);
  const VertexSet s = unite(u_star, u_c);
  const std::size_t size = s.size();
  const std::uint32_t full = (1U << size) - 1;
  std::uint32_t star_mask = 0;
  std::uint32_t c_mask = 0;
  for (std::size_t j = 0; j < size; ++j) (u_star.contains(s[j]) ? star_mask : c_mask) |= 1U << j;

  // 1_W R_{k,W} for every W ⊆ S with |W| >= 2
  std::vector<BigInt> val(full + 1);
  for (std::uint32_t w = 0; w <= full; ++w) {
    if (std::popcount(w) < 2) continue;
    std::vector<Vertex> members;
    for (std::size_t j = 0; j < size; ++j) {
      if (w & (1U << j)) members.push_back(s[j]);
    }
    val[w] = complete_naive(g, members) ? BigInt(r_naive_span(g, members, k)) : BigInt(0);
  }

  DestroyingForms out;
  out.grouped_by_w.assign(size + 1, 0);
  out.back_diagonal_by_w.assign(size + 1, 0);

  for (std::uint32_t h = 0; h <= full; ++h) {
    if (std::popcount(h) < 2 || (h & c_mask) == 0) continue;
    const std::uint32_t outside = full & ~h;
    // every T ⊆ outside, including the empty set
    for (std::uint32_t t = outside;; t = (t - 1) & outside) {
      out.literal += sign(static_cast<std::size_t>(std::popcount(t))) * val[h | t];
      if (t == 0) break;
    }
  }

  for (std::uint32_t w = 0; w <= full; ++w) {
    const int width = std::popcount(w);
    if (width < 2) continue;
    const long zeta = std::popcount(w & star_mask);
    for (int hh = 2; hh <= width; ++hh) {
      const int z = width - hh;
      const BigInt coeff = big_binomial(width, hh) - big_binomial(zeta, hh);
      out.grouped_by_w[static_cast<std::size_t>(width)] += coeff * sign(static_cast<std::size_t>(z)) * val[w];
    }
    BigInt coeff = 0;
    for (int sdeg = 2; sdeg <= width; ++sdeg) {
      coeff += sign(static_cast<std::size_t>(width - sdeg)) * (big_binomial(width, sdeg) - big_binomial(zeta, sdeg));
    }
    out.back_diagonal_by_w[static_cast<std::size_t>(width)] += coeff * val[w];
  }
  for (std::size_t w = 0; w <= size; ++w) {
    out.grouped += out.grouped_by_w[w];
    out.back_diagonal += out.back_diagonal_by_w[w];
  }
  return out;
}

ExpectedDeltaR expected_delta_r(const Graph& g, const VertexSet& u_star, int k) {
  const std::size_t m = u_star.size();
  if (m < 2 || m > static_cast<std::size_t>(k - 1)) throw std::invalid_argument("|u_star| must lie in [2, k-1]");
  const auto cliques = cliques_naive(g, k);
  if (cliques.empty()) throw std::invalid_argument("expected_delta_r needs Q_k >= 1");
  const BigInt q = cliques.size();
  const BigInt before = r_naive(g, u_star, k);
  BigInt change = 0;
  for (const VertexSet& c : cliques) {
    Graph after = g;
    remove_clique_edges(after, c);
    change += BigInt(r_naive(after, u_star, k)) - before;
  }
  BigInt destroying = 0;
  for_each_combination(common_naive(g, u_star.members()), static_cast<std::size_t>(k) - m,
                       [&](const std::vector<Vertex>& uc) {
                         if (complete_naive(g, uc)) destroying += q_destroying(g, u_star, VertexSet(uc), k);
                       });
  return {Rational(change, q), -Rational(destroying, q)};
}

DropBound drop_bound(const Graph& before, const VertexSet& u, const VertexSet& removed, int k) {
  Graph after = before;
  remove_clique_edges(after, removed);
  DropBound out;
  out.drop = r_naive(before, u, k) - r_naive(after, u, k);
  const auto common = common_naive(before, u.members());
  std::size_t hits = 0;
  bool meets_u = false;
  for (Vertex w : removed) {
    meets_u = meets_u || u.contains(w);
    if (!std::binary_search(common.begin(), common.end(), w)) continue;
    ++hits;
    // complete (k-m-1)-sets inside N_{U+w}; for m = k-1 that is just the empty set
    out.bound += u.size() + 1 == static_cast<std::size_t>(k) ? 1 : r_naive(before, unite(u, VertexSet{w}), k);
  }
  out.single_w = hits == 1 && meets_u;
  out.holds = out.drop <= out.bound && (!out.single_w || out.drop == out.bound);
  return out;
}

bool square_sum_bounds_hold(std::span<const double> values, double eps) {
  if (values.empty()) throw std::invalid_argument("square_sum_bounds_hold needs at least one value");
  if (eps < 0) throw std::invalid_argument("eps must be non-negative");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi - *lo > 2 * eps * (1 + 1e-12) + 1e-300) {
    throw std::invalid_argument("no centre lies within eps of every value");
  }
  const double l = static_cast<double>(values.size());
  double sum = 0;
  double squares = 0;
  for (double a : values) {
    sum += a;
    squares += a * a;
  }
  const double lower = sum * sum / l;
  const double upper = lower + 4 * l * eps * eps;
  const double slack = 1e-12 * std::max({std::abs(lower), std::abs(upper), 1.0});
  return lower <= squares + slack && squares <= upper + slack;
}

BigInt sign_identity_lhs(int r) {
  if (r < 2) throw std::invalid_argument("sign identity needs r >= 2");
  BigInt total = 0;
  for (int j = 2; j <= r; ++j) total += sign(static_cast<std::size_t>(r - j)) * big_binomial(r, j);
  return total;
}

BigInt sign_identity_rhs(int r) {
  if (r < 2) throw std::invalid_argument("sign identity needs r >= 2");
  return sign(static_cast<std::size_t>(r)) * (r - 1);
}

bool coefficient_identity(int k, int m) {
  if (m < 2 || m >= k) throw std::invalid_argument("coefficient identity needs 2 <= m < k");
  const long km = k - m;
  return km * (km - 1) / 2 + static_cast<long>(m) * km == static_cast<long>(k) * (k - 1) / 2 - static_cast<long>(m) * (m - 1) / 2;
}

}  // namespace krsim::oracle
