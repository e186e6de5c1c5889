#include "krsim/identity_suite.hpp"

#include <bit>
#include <functional>
#include <map>
#include <random>

#include "krsim/clique_index.hpp"
#include "krsim/edge_weighted_index.hpp"
#include "krsim/identities.hpp"
#include "krsim/process.hpp"
#include "krsim/rng.hpp"

namespace krsim {

namespace {

using nlohmann::json;

struct Instance {
  std::string label;
  Graph graph;
};

json graph_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return {{"n", g.vertex_count()}, {"edges", edges}};
}

json set_json(const VertexSet& s) { return json(std::vector<Vertex>(s.begin(), s.end())); }

std::string to_str(const BigInt& v) { return v.str(); }
std::string to_str(const Rational& v) { return v.str(); }

class Recorder {
 public:
  explicit Recorder(std::size_t cap) : cap_(cap) {}

  void check(const std::string& name, bool ok, const std::function<json()>& detail) {
    auto [it, fresh] = index_.try_emplace(name, results_.size());
    if (fresh) results_.push_back({name, 0, 0, {}});
    IdentityResult& r = results_[it->second];
    ++r.instances;
    if (ok) return;
    ++r.failures;
    if (r.counterexamples.size() < cap_) r.counterexamples.push_back(detail());
  }

  std::vector<IdentityResult> take() { return std::move(results_); }

 private:
  std::size_t cap_;
  std::map<std::string, std::size_t> index_;
  std::vector<IdentityResult> results_;
};

std::vector<Instance> generate(std::size_t n, int k, const SuiteOptions& opt) {
  std::vector<Instance> out;
  out.push_back({"complete", Graph::complete(n)});
  Rng rng(derive_seed(opt.seed, {n, static_cast<std::uint64_t>(k), 0}));
  const double fractions[] = {0.1, 0.25, 0.4};
  for (std::size_t j = 0; j < opt.random_graphs; ++j) {
    const double frac = fractions[j % 3];
    Graph g = Graph::complete(n);
    std::bernoulli_distribution drop(frac);
    for (const auto& [a, b] : g.edges()) {
      if (drop(rng)) g.remove_edge(a, b);
    }
    out.push_back({"complete-minus-random(" + std::to_string(frac) + "," + std::to_string(j) + ")", std::move(g)});
  }
  for (std::size_t j = 0; j < opt.process_states; ++j) {
    RunConfig cfg;
    cfg.n = n;
    cfg.k = k;
    cfg.seed = derive_seed(opt.seed, {n, static_cast<std::uint64_t>(k), 1, j});
    cfg.index = IndexKind::materialized;
    cfg.max_steps = j + 1;
    cfg.checkpoint_stride = 1U << 30;
    for (int m = 2; m <= k - 1; ++m) cfg.panel_sizes[m] = 0;
    out.push_back({"process(steps=" + std::to_string(j + 1) + ")", simulate(cfg).graph});
  }
  return out;
}

template <class Index>
RemovalDelta index_delta(const Graph& g, int k, const VertexSet& u) {
  Graph copy = g;
  Index idx = Index::build(copy, k);
  return idx.apply_removal(copy, u);
}

void check_instance(const Instance& inst, int k, const SuiteOptions& opt, Recorder& rec) {
  const Graph& g = inst.graph;
  const std::size_t n = g.vertex_count();
  const auto base = [&] { return json{{"instance", inst.label}, {"k", k}, {"graph", graph_json(g)}}; };
  const auto cliques = oracle::cliques_naive(g, k);

  for (int m = 2; m <= k - 1; ++m) {
    const auto dc = oracle::double_counting(g, k, m);
    rec.check("double_counting_sum", dc.sum_r == dc.binom_times_q, [&] {
      json j = base();
      j["m"] = m;
      j["sum_r"] = to_str(dc.sum_r);
      j["binom_times_q"] = to_str(dc.binom_times_q);
      return j;
    });
    rec.check("double_counting_squares", dc.sum_over_cliques == dc.sum_r_squared, [&] {
      json j = base();
      j["m"] = m;
      j["sum_over_cliques"] = to_str(dc.sum_over_cliques);
      j["sum_r_squared"] = to_str(dc.sum_r_squared);
      return j;
    });
  }

  for (const VertexSet& u : cliques) {
    const std::uint64_t observed = oracle::observed_delta_q(g, u, k);
    const std::uint64_t via_split = oracle::delta_q_via_q_um(g, u, k);
    rec.check("removal_split", via_split == observed, [&] {
      json j = base();
      j["u_k"] = set_json(u);
      j["sum_q_um"] = via_split;
      j["observed"] = observed;
      return j;
    });
    const BigInt via_r = oracle::delta_q_via_r(g, u, k);
    rec.check("signed_r_sum", via_r == observed, [&] {
      json j = base();
      j["u_k"] = set_json(u);
      j["signed_r_sum"] = to_str(via_r);
      j["observed"] = observed;
      return j;
    });

    RemovalDelta expected;
    expected.k = k;
    const std::vector<Vertex> members(u.begin(), u.end());
    for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
      const int m = std::popcount(mask);
      if (m < 2) continue;
      std::vector<Vertex> sub;
      for (int b = 0; b < k; ++b) {
        if (mask & (1U << b)) sub.push_back(members[static_cast<std::size_t>(b)]);
      }
      const VertexSet um(sub);
      const std::uint64_t direct = oracle::q_um(g, u, um, k);
      expected.by_m[static_cast<std::size_t>(m)] += direct;
      const BigInt ie = oracle::q_um_via_inclusion_exclusion(g, u, um, k);
      rec.check("inclusion_exclusion", ie == direct, [&] {
        json j = base();
        j["u_k"] = set_json(u);
        j["u_m"] = set_json(um);
        j["direct"] = direct;
        j["inclusion_exclusion"] = to_str(ie);
        return j;
      });
    }
    for (const auto& [name, got] : {std::pair{std::string("index_delta_materialized"), index_delta<CliqueIndex>(g, k, u)},
                                    std::pair{std::string("index_delta_edge_weighted"), index_delta<EdgeWeightedIndex>(g, k, u)}}) {
      rec.check(name, got == expected, [&] {
        json j = base();
        j["u_k"] = set_json(u);
        j["expected"] = std::vector<std::uint64_t>(expected.by_m.begin(), expected.by_m.begin() + k + 1);
        j["got"] = std::vector<std::uint64_t>(got.by_m.begin(), got.by_m.begin() + k + 1);
        return j;
      });
    }
  }

  if (!cliques.empty()) {
    const auto e = oracle::expected_delta_q(g, k);
    rec.check("expected_change_q", e.exhaustive == e.formula, [&] {
      json j = base();
      j["exhaustive"] = to_str(e.exhaustive);
      j["formula"] = to_str(e.formula);
      return j;
    });
  }

  if (n > opt.destroying_max_n) return;
  for (int m = 2; m <= k - 1; ++m) {
    for (const VertexSet& u_star : oracle::cliques_naive(Graph::complete(n), m)) {
      // every m-set, complete or not
      const VertexSet common = common_neighborhood(g, u_star);
      for (const VertexSet& u_c : oracle::cliques_naive(g, k - m)) {
        bool inside = true;
        for (Vertex v : u_c) inside = inside && common.contains(v);
        if (!inside) continue;
        const std::uint64_t brute = oracle::q_destroying(g, u_star, u_c, k);
        const auto forms = oracle::q_destroying_forms(g, u_star, u_c, k);
        const bool ok = forms.literal == brute && forms.grouped == brute && forms.back_diagonal == brute &&
                        forms.grouped_by_w == forms.back_diagonal_by_w;
        rec.check("destroying_count", ok, [&] {
          json j = base();
          j["u_star"] = set_json(u_star);
          j["u_c"] = set_json(u_c);
          j["brute"] = brute;
          j["literal"] = to_str(forms.literal);
          j["grouped"] = to_str(forms.grouped);
          j["back_diagonal"] = to_str(forms.back_diagonal);
          return j;
        });
      }
      if (cliques.empty()) continue;
      const auto er = oracle::expected_delta_r(g, u_star, k);
      rec.check("expected_change_r", er.exhaustive == er.formula, [&] {
        json j = base();
        j["u_star"] = set_json(u_star);
        j["exhaustive"] = to_str(er.exhaustive);
        j["formula"] = to_str(er.formula);
        return j;
      });
      for (const VertexSet& removed : cliques) {
        const auto db = oracle::drop_bound(g, u_star, removed, k);
        rec.check("drop_bound", db.holds, [&] {
          json j = base();
          j["u_star"] = set_json(u_star);
          j["removed"] = set_json(removed);
          j["drop"] = db.drop;
          j["bound"] = db.bound;
          j["single_w"] = db.single_w;
          return j;
        });
      }
    }
  }
}

}  // namespace

bool SuiteReport::passed() const {
  for (const auto& r : results) {
    if (r.failures != 0) return false;
  }
  return !results.empty();
}

nlohmann::json SuiteReport::to_json() const {
  json j;
  j["passed"] = passed();
  j["graphs"] = graphs;
  json list = json::array();
  for (const auto& r : results) {
    list.push_back({{"identity", r.name},
                    {"instances", r.instances},
                    {"failures", r.failures},
                    {"counterexamples", r.counterexamples}});
  }
  j["identities"] = list;
  return j;
}

SuiteReport run_identity_suite(const SuiteOptions& opt) {
  Recorder rec(opt.max_counterexamples);
  SuiteReport report;
  for (int k : opt.ks) {
    for (std::size_t n = static_cast<std::size_t>(k); n <= opt.max_n; ++n) {
      for (const Instance& inst : generate(n, k, opt)) {
        ++report.graphs;
        check_instance(inst, k, opt, rec);
      }
    }
  }
  for (int r = 2; r <= 12; ++r) {
    const BigInt lhs = oracle::sign_identity_lhs(r);
    const BigInt rhs = oracle::sign_identity_rhs(r);
    rec.check("sign_identity", lhs == rhs, [&] { return json{{"r", r}, {"lhs", to_str(lhs)}, {"rhs", to_str(rhs)}}; });
  }
  for (int k = 3; k <= 8; ++k) {
    for (int m = 2; m < k; ++m) {
      rec.check("coefficient_identity", oracle::coefficient_identity(k, m), [&] { return json{{"k", k}, {"m", m}}; });
    }
  }
  Rng rng(derive_seed(opt.seed, {99}));
  std::uniform_real_distribution<double> centre(-100, 100);
  std::uniform_real_distribution<double> unit(-1, 1);
  std::uniform_real_distribution<double> spread(0, 10);
  for (int t = 0; t < 1000; ++t) {
    const double a = centre(rng);
    const double eps = spread(rng);
    std::vector<double> values(1 + static_cast<std::size_t>(t % 40));
    for (double& v : values) v = a + eps * unit(rng);
    rec.check("square_sum_bounds", oracle::square_sum_bounds_hold(values, eps), [&] { return json{{"values", values}, {"eps", eps}}; });
  }
  report.results = rec.take();
  return report;
}

}  // namespace krsim
