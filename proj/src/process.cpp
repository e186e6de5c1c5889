#include "krsim/process.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "krsim/clique_index.hpp"
#include "krsim/edge_weighted_index.hpp"
#include "krsim/rng.hpp"
#include "krsim/trajectory.hpp"

namespace krsim {

std::string to_string(StopRule rule) {
  return rule == StopRule::at_hitting_time ? "hitting_time" : "p_floor";
}

std::string to_string(IndexKind kind) {
  return kind == IndexKind::edge_weighted ? "edge_weighted" : "materialized";
}

StopRule parse_stop_rule(const std::string& s) {
  if (s == "hitting_time" || s == "hitting") return StopRule::at_hitting_time;
  if (s == "p_floor" || s == "floor") return StopRule::at_p_floor;
  throw std::invalid_argument("unknown stop rule '" + s + "' (hitting_time|p_floor)");
}

IndexKind parse_index_kind(const std::string& s) {
  if (s == "edge_weighted" || s == "edge-weighted") return IndexKind::edge_weighted;
  if (s == "materialized" || s == "materialised") return IndexKind::materialized;
  throw std::invalid_argument("unknown index kind '" + s + "' (edge_weighted|materialized)");
}

std::uint64_t default_checkpoint_stride(std::size_t n, int k) {
  const std::uint64_t denom = static_cast<std::uint64_t>(k) * (k - 1) * 400;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n) * n / denom);
}

std::uint64_t RunConfig::effective_stride() const {
  return checkpoint_stride == 0 ? default_checkpoint_stride(n, k) : checkpoint_stride;
}

std::size_t RunConfig::panel_size(int m) const {
  const auto it = panel_sizes.find(m);
  return it == panel_sizes.end() ? kDefaultPanelSize : it->second;
}

void RunConfig::validate() const {
  if (k < 3) throw std::invalid_argument("k must be at least 3");
  if (k > kMaxK) throw std::invalid_argument("k must be at most " + std::to_string(kMaxK));
  if (n < static_cast<std::size_t>(k)) throw std::invalid_argument("n must be at least k");
  if (!(p_floor > 0.0 && p_floor <= 1.0)) throw std::invalid_argument("p_floor must lie in (0, 1]");
  if (!(p_start > 0.0 && p_start <= 1.0)) throw std::invalid_argument("p_start must lie in (0, 1]");
  for (const auto& [m, size] : panel_sizes) {
    (void)size;
    if (m < 2 || m > k - 1) throw std::invalid_argument("panel sizes are keyed by m in [2, k-1]");
  }
  if (record_full_extremes) {
    double sets = 0;
    for (int m = 2; m <= k - 1; ++m) sets += binomial_real(static_cast<double>(n), m);
    if (sets > 5e6) {
      throw std::invalid_argument("record_full_extremes needs sum_m C(n,m) <= 5e6 (small n only)");
    }
  }
}

std::optional<std::uint64_t> hitting_time(const ProcessTrace& trace) { return trace.hitting_time; }

std::vector<std::uint64_t> panel_r_values(const Graph& g, std::span<const VertexSet> panel, int k) {
  std::vector<std::uint64_t> out;
  out.reserve(panel.size());
  for (const VertexSet& u : panel) out.push_back(count_r(g, u, k));
  return out;
}

std::uint64_t panel_drop(const Graph& before, const VertexSet& u, const Bitset& common,
                         const VertexSet& removed, int k) {
  // A complete (k-m)-set C inside N_U dies iff the removed clique contains
  // an edge inside C, or an edge from U to C. With A = removed ∩ N_U and
  // B = removed ∩ U that means |C ∩ A| >= 1 when B is non-empty and
  // |C ∩ A| >= 2 otherwise. Count by the exact trace T = C ∩ A.
  const int s = k - static_cast<int>(u.size());
  std::vector<Vertex> a;
  bool touches_u = false;
  for (Vertex v : removed) {
    if (common.test(v)) a.push_back(v);
    if (u.contains(v)) touches_u = true;
  }
  const std::size_t threshold = touches_u ? 1 : 2;
  if (a.size() < threshold) return 0;

  const std::size_t n = before.vertex_count();
  const auto& kern = simd::active();
  Bitset outside_a(n);
  kern.andnot_into(outside_a.words().data(), common.words().data(),
                   Bitset::from(VertexSet(a), n).words().data(), before.word_count());
  Bitset rest(n);
  std::uint64_t total = 0;
  const std::uint32_t subsets = 1U << a.size();
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    const int t = std::popcount(mask);
    if (static_cast<std::size_t>(t) < threshold || t > s) continue;
    auto dst = rest.words();
    std::copy(outside_a.words().begin(), outside_a.words().end(), dst.begin());
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (mask & (1U << j)) kern.and_into(dst.data(), dst.data(), before.row(a[j]).data(), dst.size());
    }
    total += count_cliques_within(before, rest.words(), s - t);
  }
  return total;
}

namespace {

std::vector<VertexSet> draw_panel(std::size_t n, int m, std::size_t count, Rng& rng) {
  std::vector<VertexSet> out;
  if (count == 0) return out;
  const double available = binomial_real(static_cast<double>(n), m);
  if (static_cast<double>(count) >= available - 0.5) {
    // every m-set, lexicographic
    std::vector<Vertex> cur(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) cur[static_cast<std::size_t>(j)] = static_cast<Vertex>(j);
    while (true) {
      out.emplace_back(cur);
      int j = m - 1;
      while (j >= 0 && cur[static_cast<std::size_t>(j)] == n - static_cast<std::size_t>(m - j)) --j;
      if (j < 0) break;
      ++cur[static_cast<std::size_t>(j)];
      for (int l = j + 1; l < m; ++l) cur[static_cast<std::size_t>(l)] = cur[static_cast<std::size_t>(l - 1)] + 1;
    }
    return out;
  }
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
  std::set<VertexSet> seen;
  while (out.size() < count) {
    std::vector<Vertex> members;
    while (members.size() < static_cast<std::size_t>(m)) {
      const Vertex v = pick(rng);
      if (std::find(members.begin(), members.end(), v) == members.end()) members.push_back(v);
    }
    VertexSet s(std::move(members));
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

struct PanelState {
  std::vector<std::vector<VertexSet>> sets;      // by m-2
  std::vector<std::vector<Bitset>> commons;      // N_U, maintained
  std::vector<std::vector<std::uint64_t>> r;     // R_{k,U}, maintained
};

Extremes full_extremes(const Graph& g, int m, int k) {
  const std::size_t n = g.vertex_count();
  Extremes ex{~std::uint64_t{0}, 0};
  std::vector<Vertex> cur(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) cur[static_cast<std::size_t>(j)] = static_cast<Vertex>(j);
  while (true) {
    const std::uint64_t r = count_r(g, std::span<const Vertex>(cur), k);
    ex.min = std::min(ex.min, r);
    ex.max = std::max(ex.max, r);
    int j = m - 1;
    while (j >= 0 && cur[static_cast<std::size_t>(j)] == n - static_cast<std::size_t>(m - j)) --j;
    if (j < 0) break;
    ++cur[static_cast<std::size_t>(j)];
    for (int l = j + 1; l < m; ++l) cur[static_cast<std::size_t>(l)] = cur[static_cast<std::size_t>(l - 1)] + 1;
  }
  return ex;
}

class Engine {
 public:
  Engine(const RunConfig& cfg, const StepObserver& observer) : cfg_(cfg), observer_(observer) {}

  RunOutcome run() {
    cfg_.validate();
    const std::size_t n = cfg_.n;
    const int k = cfg_.k;
    (void)binomial(n, static_cast<std::uint64_t>(k));  // Q_k(0) must fit in 63 bits
    guard_memory();

    Graph g = Graph::complete(n);
    trace_.n = n;
    trace_.k = k;
    trace_.seed = cfg_.seed;
    trace_.index = cfg_.index;
    if (cfg_.p_start < 1.0) {
      trace_.approximate_start = true;
      Rng thin(derive_seed(cfg_.seed, {kStreamStartDensity}));
      std::bernoulli_distribution keep(cfg_.p_start);
      for (const auto& [a, b] : g.edges()) {
        if (!keep(thin)) g.remove_edge(a, b);
      }
    }
    trace_.initial_edges = g.edge_count();
    trace_.max_step_drop_r.assign(static_cast<std::size_t>(k - 2), 0);
    trace_.removed_by_m.assign(static_cast<std::size_t>(k + 1), 0);

    Rng panel_rng(derive_seed(cfg_.seed, {kStreamPanel}));
    for (int m = 2; m <= k - 1; ++m) {
      auto sets = draw_panel(n, m, cfg_.panel_size(m), panel_rng);
      std::vector<Bitset> commons;
      std::vector<std::uint64_t> r;
      for (const VertexSet& u : sets) {
        commons.push_back(common_neighborhood_bits(g, u.members()));
        r.push_back(count_r(g, u, k));
      }
      panel_.sets.push_back(std::move(sets));
      panel_.commons.push_back(std::move(commons));
      panel_.r.push_back(std::move(r));
    }
    trace_.panel = panel_.sets;

    if (cfg_.index == IndexKind::materialized) {
      loop(CliqueIndex::build(g, k), g);
    } else {
      loop(EdgeWeightedIndex::build(g, k), g);
    }
    return {std::move(trace_), std::move(g)};
  }

 private:
  void guard_memory() const {
    std::uint64_t bytes = 0;
    if (cfg_.index == IndexKind::materialized) {
      bytes = CliqueIndex::estimated_bytes(binomial(cfg_.n, static_cast<std::uint64_t>(cfg_.k)), cfg_.k);
    } else {
      bytes = EdgeWeightedIndex::estimated_bytes(cfg_.n);
    }
    if (bytes > cfg_.memory_budget_bytes) {
      throw std::length_error(fmt::format(
          "memory guard: {} index for n={}, k={} needs ~{} MiB, budget is {} MiB",
          to_string(cfg_.index), cfg_.n, cfg_.k, bytes >> 20, cfg_.memory_budget_bytes >> 20));
    }
  }

  double density(std::uint64_t step, std::uint64_t edges) const {
    if (!trace_.approximate_start) return p_of(static_cast<double>(step), cfg_.n, cfg_.k);
    const double nn = static_cast<double>(cfg_.n);
    return (2.0 * static_cast<double>(edges) + nn) / (nn * nn);
  }

  void record(const Graph& g, std::uint64_t step, std::uint64_t q) {
    Checkpoint cp;
    cp.step = step;
    cp.edges = g.edge_count();
    cp.p = density(step, cp.edges);
    cp.q_k = q;
    for (std::size_t mi = 0; mi < panel_.sets.size(); ++mi) {
      const auto exact = panel_r_values(g, panel_.sets[mi], cfg_.k);
      if (exact != panel_.r[mi]) {
        throw std::logic_error(fmt::format("panel R drifted from recount at step {} (m={})", step, mi + 2));
      }
      PanelStats st;
      if (!exact.empty()) {
        double sum = 0;
        st.min = exact.front();
        st.max = exact.front();
        for (std::uint64_t r : exact) {
          sum += static_cast<double>(r);
          st.min = std::min(st.min, r);
          st.max = std::max(st.max, r);
        }
        st.mean = sum / static_cast<double>(exact.size());
      }
      cp.panel.push_back(st);
      if (cfg_.record_full_extremes) cp.extremes.push_back(full_extremes(g, static_cast<int>(mi) + 2, cfg_.k));
    }
    trace_.checkpoints.push_back(std::move(cp));
  }

  void notify(std::uint64_t step, const Graph& g, std::uint64_t q, const VertexSet* removed,
              const RemovalDelta* delta) const {
    if (!observer_) return;
    StepEvent ev;
    ev.step = step;
    ev.edges = g.edge_count();
    ev.q_k = q;
    ev.removed = removed;
    ev.delta = delta;
    ev.panel_r = panel_.r;
    observer_(ev);
  }

  template <class Index>
  void loop(Index idx, Graph& g) {
    const int k = cfg_.k;
    const std::uint64_t pairs = static_cast<std::uint64_t>(k) * (k - 1) / 2;
    const std::uint64_t stride = cfg_.effective_stride();
    Rng rng(derive_seed(cfg_.seed, {kStreamSampling}));

    std::uint64_t step = 0;
    std::uint64_t q = idx.size();
    record(g, 0, q);
    notify(0, g, q, nullptr, nullptr);

    std::vector<std::vector<std::uint64_t>> drops(panel_.sets.size());
    while (true) {
      if (q == 0) {
        trace_.hitting_time = step;
        trace_.final_edge_count = g.edge_count();
        break;
      }
      if (cfg_.stop == StopRule::at_p_floor && density(step, g.edge_count()) <= cfg_.p_floor + 1e-12) break;
      if (cfg_.max_steps && step >= *cfg_.max_steps) break;

      const VertexSet u = idx.sample(g, rng);
      for (std::size_t mi = 0; mi < panel_.sets.size(); ++mi) {
        drops[mi].resize(panel_.sets[mi].size());
        for (std::size_t s = 0; s < panel_.sets[mi].size(); ++s) {
          drops[mi][s] = panel_drop(g, panel_.sets[mi][s], panel_.commons[mi][s], u, k);
        }
      }

      const RemovalDelta delta = idx.apply_removal(g, u);
      ++step;
      const std::uint64_t q_next = idx.size();
      if (delta.by_m[static_cast<std::size_t>(k)] != 1 || delta.total() != q - q_next) {
        throw std::logic_error(fmt::format("removal delta inconsistent with Q_k at step {}", step));
      }
      if (g.edge_count() + pairs * step != trace_.initial_edges) {
        throw std::logic_error(fmt::format("edge count off the C(n,2) - C(k,2) i line at step {}", step));
      }
      trace_.max_step_drop_q = std::max(trace_.max_step_drop_q, q - q_next);
      for (int m = 2; m <= k; ++m) trace_.removed_by_m[static_cast<std::size_t>(m)] += delta.by_m[static_cast<std::size_t>(m)];
      q = q_next;

      for (std::size_t mi = 0; mi < panel_.sets.size(); ++mi) {
        for (std::size_t s = 0; s < panel_.sets[mi].size(); ++s) {
          const VertexSet& set = panel_.sets[mi][s];
          const std::uint64_t drop = drops[mi][s];
          if (drop > panel_.r[mi][s]) throw std::logic_error("panel drop exceeds current R");
          panel_.r[mi][s] -= drop;
          trace_.max_step_drop_r[mi] = std::max(trace_.max_step_drop_r[mi], drop);
          bool touches = false;
          for (Vertex v : u) touches = touches || set.contains(v);
          if (touches) {
            for (Vertex v : u) panel_.commons[mi][s].reset(v);
          }
        }
      }

      notify(step, g, q, &u, &delta);
      if (step % stride == 0) record(g, step, q);
    }
    if (trace_.checkpoints.back().step != step) record(g, step, q);
    trace_.steps = step;
  }

  RunConfig cfg_;
  const StepObserver& observer_;
  ProcessTrace trace_;
  PanelState panel_;
};

}  // namespace

RunOutcome simulate(const RunConfig& cfg, const StepObserver& observer) {
  return Engine(cfg, observer).run();
}

ProcessTrace run(const RunConfig& cfg, const StepObserver& observer) {
  return simulate(cfg, observer).trace;
}

void write_trace_csv(std::ostream& os, const ProcessTrace& trace) {
  const int k = trace.k;
  const bool extremes = !trace.checkpoints.empty() && !trace.checkpoints.front().extremes.empty();
  os << "i,p,edges,q_k";
  for (int m = 2; m <= k - 1; ++m) os << fmt::format(",r_mean_m{0},r_min_m{0},r_max_m{0}", m);
  if (extremes) {
    for (int m = 2; m <= k - 1; ++m) os << fmt::format(",r_exact_min_m{0},r_exact_max_m{0}", m);
  }
  os << '\n';
  for (const Checkpoint& cp : trace.checkpoints) {
    os << fmt::format("{},{},{},{}", cp.step, cp.p, cp.edges, cp.q_k);
    for (const PanelStats& st : cp.panel) os << fmt::format(",{},{},{}", st.mean, st.min, st.max);
    for (const Extremes& ex : cp.extremes) os << fmt::format(",{},{}", ex.min, ex.max);
    os << '\n';
  }
}

nlohmann::json trace_summary_json(const ProcessTrace& trace) {
  nlohmann::json j;
  j["n"] = trace.n;
  j["k"] = trace.k;
  j["seed"] = trace.seed;
  j["index"] = to_string(trace.index);
  j["approximate_start"] = trace.approximate_start;
  j["M"] = trace.hitting_time ? nlohmann::json(*trace.hitting_time) : nlohmann::json(nullptr);
  j["final_edges"] =
      trace.final_edge_count ? nlohmann::json(*trace.final_edge_count) : nlohmann::json(nullptr);
  j["steps"] = trace.steps;
  j["edges_at_stop"] = trace.checkpoints.empty() ? 0 : trace.checkpoints.back().edges;
  j["q_k_at_stop"] = trace.checkpoints.empty() ? 0 : trace.checkpoints.back().q_k;
  j["max_step_drop_q"] = trace.max_step_drop_q;
  nlohmann::json drop_r = nlohmann::json::object();
  for (std::size_t mi = 0; mi < trace.max_step_drop_r.size(); ++mi) {
    drop_r[std::to_string(mi + 2)] = trace.max_step_drop_r[mi];
  }
  j["max_step_drop_r"] = drop_r;
  nlohmann::json removed = nlohmann::json::object();
  for (int m = 2; m <= trace.k; ++m) removed[std::to_string(m)] = trace.removed_by_m[static_cast<std::size_t>(m)];
  j["removed_by_m"] = removed;
  j["checkpoints"] = trace.checkpoints.size();
  return j;
}

}  // namespace krsim
