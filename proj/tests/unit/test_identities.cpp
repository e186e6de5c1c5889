#include <doctest.h>

#include <random>

#include "krsim/identities.hpp"
#include "krsim/identity_suite.hpp"
#include "krsim/process.hpp"

using namespace krsim;
using namespace krsim::oracle;

TEST_CASE("removal split on K_6") {
  const Graph g = Graph::complete(6);
  const VertexSet u{0, 1, 2, 3};
  CHECK(q_um(g, u, VertexSet{0, 1}, 4) == 1);
  CHECK(q_um(g, u, u, 4) == 1);
  CHECK(q_um_via_inclusion_exclusion(g, u, VertexSet{0, 1}, 4) == 1);
  CHECK(q_um_via_inclusion_exclusion(g, u, u, 4) == 1);
  CHECK(delta_q_via_q_um(g, u, 4) == 15);
  CHECK(delta_q_via_r(g, u, 4) == 15);
  CHECK(observed_delta_q(g, u, 4) == 15);
}

TEST_CASE("signed R sum on K_5 with k = 5 kills only the clique itself") {
  const Graph g = Graph::complete(5);
  CHECK(delta_q_via_r(g, VertexSet{0, 1, 2, 3, 4}, 5) == 1);
}

TEST_CASE("expected change of Q_k") {
  const auto e6 = expected_delta_q(Graph::complete(6), 4);
  CHECK(e6.exhaustive == Rational(-15));
  CHECK(e6.formula == Rational(-15));
  const auto e5 = expected_delta_q(Graph::complete(5), 5);
  CHECK(e5.exhaustive == Rational(-1));
  CHECK(e5.formula == Rational(-1));
  CHECK_THROWS_AS(expected_delta_q(Graph::empty(6), 4), std::invalid_argument);
}

TEST_CASE("expected change agrees on random graphs") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 5 + t % 5;
    Graph g = Graph::complete(n);
    std::bernoulli_distribution drop(0.25);
    for (const auto& [a, b] : g.edges()) {
      if (drop(rng)) g.remove_edge(a, b);
    }
    for (int k = 3; k <= 5; ++k) {
      if (cliques_naive(g, k).empty()) continue;
      const auto e = expected_delta_q(g, k);
      CHECK(e.exhaustive == e.formula);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("double counting") {
  const auto d = double_counting(Graph::complete(7), 4, 2);
  CHECK(d.sum_r == d.binom_times_q);
  CHECK(d.sum_over_cliques == d.sum_r_squared);
  CHECK(d.binom_times_q == 6 * 35);
}

TEST_CASE("destroying count on K_6") {
  const Graph g = Graph::complete(6);
  const VertexSet star{0, 1};
  const VertexSet c{2, 3};
  CHECK(relevant_edge_count(2, 4) == 5);
  CHECK(q_destroying(g, star, c, 4) == 14);
  const auto f = q_destroying_forms(g, star, c, 4);
  CHECK(f.literal == 14);
  CHECK(f.grouped == 14);
  CHECK(f.back_diagonal == 14);
  CHECK(f.grouped_by_w == f.back_diagonal_by_w);
  const auto r = expected_delta_r(g, star, 4);
  CHECK(r.formula == Rational(-28, 5));
  CHECK(r.exhaustive == Rational(-28, 5));
}

TEST_CASE("destroying count ignores edges inside u_star") {
  Graph g = Graph::complete(7);
  g.remove_edge(0, 1);  // u_star need not be complete
  const VertexSet star{0, 1};
  for (const auto& c : cliques_naive(g, 2)) {
    if (c.contains(0) || c.contains(1)) continue;
    const auto brute = q_destroying(g, star, c, 4);
    const auto f = q_destroying_forms(g, star, c, 4);
    CHECK(f.literal == brute);
    CHECK(f.back_diagonal == brute);
  }
  CHECK_THROWS_AS(q_destroying(g, star, VertexSet{0, 2}, 4), std::invalid_argument);
}

TEST_CASE("drop bound, with equality for a single shared vertex") {
  const Graph g = Graph::complete(7);
  const VertexSet u{0, 1};
  // removed triangle meets N_U in vertex 2 only
  const auto single = drop_bound(g, u, VertexSet{0, 1, 2}, 3);
  CHECK(single.single_w);
  CHECK(single.drop == single.bound);
  const auto wide = drop_bound(g, u, VertexSet{0, 2, 3, 4}, 4);
  CHECK(wide.holds);
  CHECK(wide.drop < wide.bound);
}

TEST_CASE("square-sum bounds") {
  const std::vector<double> v{1, 2, 3};
  CHECK(square_sum_bounds_hold(v, 1));
  const std::vector<double> flat(9, 4.5);
  CHECK(square_sum_bounds_hold(flat, 0));
  CHECK_THROWS_AS(square_sum_bounds_hold(v, 0.5), std::invalid_argument);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 1000; ++t) {
    const double eps = 0.01 + 3 * (u(rng) + 1);
    const double centre = 50 * u(rng);
    std::vector<double> xs(1 + t % 25);
    for (double& x : xs) x = centre + eps * u(rng);
    CHECK(square_sum_bounds_hold(xs, eps));
  }
}

TEST_CASE("sign and coefficient identities") {
  CHECK(sign_identity_lhs(3) == -2);
  for (int r = 2; r <= 12; ++r) CHECK(sign_identity_lhs(r) == sign_identity_rhs(r));
  for (int k = 3; k <= 8; ++k) {
    for (int m = 2; m < k; ++m) CHECK(coefficient_identity(k, m));
  }
}

TEST_CASE("identity suite on a reduced family") {
  SuiteOptions opt;
  opt.max_n = 7;
  opt.destroying_max_n = 6;
  opt.random_graphs = 2;
  opt.process_states = 1;
  const SuiteReport r = run_identity_suite(opt);
  CHECK(r.passed());
  CHECK(r.to_json()["passed"] == true);
}
