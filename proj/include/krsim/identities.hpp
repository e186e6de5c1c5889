#pragma once
// Exact brute-force checks of the counting identities behind the removal
// process: how many K_k die with one removal, the expected one-step change of
// Q_k, and how many K_k destroy a given extension of an m-set. Everything here
// enumerates subsets naively and is meant for n <= 10.

#include <cstdint>
#include <span>
#include <vector>

#include "krsim/exact.hpp"
#include "krsim/graph.hpp"

namespace krsim::oracle {

// R_{k,U} by plain subset enumeration (independent of the bitset counters).
std::uint64_t r_naive(const Graph& g, const VertexSet& u, int k);
// All k-cliques by plain subset enumeration.
std::vector<VertexSet> cliques_naive(const Graph& g, int k);

// Number of K_k whose intersection with u_k is exactly u_m.
std::uint64_t q_um(const Graph& g, const VertexSet& u_k, const VertexSet& u_m, int k);
// Same count by inclusion-exclusion over supersets of u_m inside u_k.
BigInt q_um_via_inclusion_exclusion(const Graph& g, const VertexSet& u_k, const VertexSet& u_m, int k);
// Sum of q_um over every U_m of u_k with |U_m| >= 2.
std::uint64_t delta_q_via_q_um(const Graph& g, const VertexSet& u_k, int k);
// Number of K_k killed by deleting u_k, from R values only:
// sum_{m=2}^{k-1} (-1)^m (m-1) sum_{U_m ⊆ u_k} R_{k,U_m} + (-1)^k (k-1).
BigInt delta_q_via_r(const Graph& g, const VertexSet& u_k, int k);
// Q_k(g) - Q_k(g minus the edges of u_k), by recounting.
std::uint64_t observed_delta_q(const Graph& g, const VertexSet& u_k, int k);

struct ExpectedDeltaQ {
  Rational exhaustive;  // average of Q(i+1) - Q(i) over every current K_k
  Rational formula;     // (-1)^{k+1}(k-1) - (1/Q) sum_m (-1)^m (m-1) sum_{U_m ∈ K_m} R^2
};
// Precondition: g has at least one K_k.
ExpectedDeltaQ expected_delta_q(const Graph& g, int k);

struct DoubleCounting {
  BigInt sum_r;          // sum over complete m-sets of R_{k,U_m}
  BigInt binom_times_q;  // C(k,m) Q_k
  BigInt sum_over_cliques;  // sum over K_k, over their m-subsets, of R_{k,U_m}
  BigInt sum_r_squared;     // sum over complete m-sets of R_{k,U_m}^2
};
DoubleCounting double_counting(const Graph& g, int k, int m);

// Edges whose deletion takes u_c out of the complete (k-m)-sets of N_{u_star}:
// the pairs inside u_c and the pairs between u_star and u_c.
std::uint64_t relevant_edge_count(std::size_t m_star, std::size_t k);

// K_k containing at least one relevant edge, counted directly.
std::uint64_t q_destroying(const Graph& g, const VertexSet& u_star, const VertexSet& u_c, int k);

struct DestroyingForms {
  BigInt literal;        // sum over H (|H| >= 2, meets u_c) and T of (-1)^|T| 1_{H∪T} R_{H∪T}
  BigInt grouped;        // multiplicity form: [C(h+z,h) - C(ζ,h)] (-1)^z summed over (h, z)
  BigInt back_diagonal;  // per union size w: sum_s (-1)^{w-s}[C(w,s) - C(ζ,s)]
  std::vector<BigInt> grouped_by_w;        // anti-diagonals of the (h, z) table, index w
  std::vector<BigInt> back_diagonal_by_w;  // index w
};
DestroyingForms q_destroying_forms(const Graph& g, const VertexSet& u_star, const VertexSet& u_c, int k);

struct ExpectedDeltaR {
  Rational exhaustive;  // average of R(i+1) - R(i) over every current K_k
  Rational formula;     // -sum_{u_c} q_destroying / Q
};
ExpectedDeltaR expected_delta_r(const Graph& g, const VertexSet& u_star, int k);

// One-step drop of R_{k,U} when `removed` is deleted, against the bound
// sum_{w ∈ removed ∩ N_U} of the number of complete (k-m-1)-sets inside
// N_{U∪{w}} (R_{k,U∪{w}} for m < k-1, and 1 for m = k-1). When removed ∩ N_U
// is a single vertex and removed meets U, the drop equals that count exactly.
struct DropBound {
  std::uint64_t drop = 0;
  std::uint64_t bound = 0;
  bool single_w = false;
  bool holds = false;
};
DropBound drop_bound(const Graph& before, const VertexSet& u, const VertexSet& removed, int k);

// (sum a)^2/l <= sum a^2 <= (sum a)^2/l + 4 l eps^2, given every value lies
// within eps of one centre. A relative slack of 1e-12 absorbs rounding.
bool square_sum_bounds_hold(std::span<const double> values, double eps);

// sum_{j=2}^r (-1)^{r-j} C(r,j) and (-1)^r (r-1).
BigInt sign_identity_lhs(int r);
BigInt sign_identity_rhs(int r);

// C(k-m,2) + m(k-m) == C(k,2) - C(m,2).
bool coefficient_identity(int k, int m);

}  // namespace krsim::oracle
