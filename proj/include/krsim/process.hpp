#pragma once
// The random K_k-removal process: start from K_n, repeatedly delete the edges
// of a uniformly chosen K_k, stop when none is left (or at a density floor).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "krsim/graph.hpp"
#include "krsim/removal_delta.hpp"

namespace krsim {

enum class StopRule { at_hitting_time, at_p_floor };
enum class IndexKind { edge_weighted, materialized };

std::string to_string(StopRule rule);
std::string to_string(IndexKind kind);
StopRule parse_stop_rule(const std::string& s);
IndexKind parse_index_kind(const std::string& s);

inline constexpr std::size_t kDefaultPanelSize = 200;
inline constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{2} << 30;

struct RunConfig {
  std::size_t n = 0;
  int k = 4;
  std::uint64_t seed = 0;
  // 0 selects the default: max(1, floor(n^2 / (k(k-1) * 400))).
  std::uint64_t checkpoint_stride = 0;
  // Tracked U_m sets per m in [2, k-1]; missing entries use kDefaultPanelSize.
  std::map<int, std::size_t> panel_sizes;
  StopRule stop = StopRule::at_hitting_time;
  double p_floor = 0.3;
  // Exact min/max of R over every m-set at each checkpoint (small n only).
  bool record_full_extremes = false;
  IndexKind index = IndexKind::edge_weighted;
  // < 1 starts from K_n with each edge kept independently with this
  // probability. Approximation mode: the process itself always starts at K_n.
  double p_start = 1.0;
  std::optional<std::uint64_t> max_steps;
  std::uint64_t memory_budget_bytes = kDefaultMemoryBudget;

  std::uint64_t effective_stride() const;
  std::size_t panel_size(int m) const;
  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

std::uint64_t default_checkpoint_stride(std::size_t n, int k);

struct PanelStats {
  double mean = 0.0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
};

struct Extremes {
  std::uint64_t min = 0;
  std::uint64_t max = 0;
};

struct Checkpoint {
  std::uint64_t step = 0;
  double p = 1.0;
  std::uint64_t edges = 0;
  std::uint64_t q_k = 0;
  std::vector<PanelStats> panel;     // entry m-2 for m = 2..k-1 (empty panel -> zeros)
  std::vector<Extremes> extremes;    // same layout; empty unless recorded
};

struct ProcessTrace {
  std::size_t n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  IndexKind index = IndexKind::edge_weighted;
  bool approximate_start = false;
  std::uint64_t initial_edges = 0;
  std::vector<Checkpoint> checkpoints;
  std::optional<std::uint64_t> hitting_time;
  std::optional<std::uint64_t> final_edge_count;
  std::uint64_t steps = 0;
  std::uint64_t max_step_drop_q = 0;
  std::vector<std::uint64_t> max_step_drop_r;    // entry m-2
  std::vector<std::uint64_t> removed_by_m;       // cliques destroyed, summed over steps, entry m
  std::vector<std::vector<VertexSet>> panel;     // entry m-2
};

// State after a step, handed to a StepObserver. panel_r holds the current
// R value of every panel set, grouped by m as in ProcessTrace::panel.
struct StepEvent {
  std::uint64_t step = 0;
  std::uint64_t edges = 0;
  std::uint64_t q_k = 0;
  const VertexSet* removed = nullptr;   // null for the initial state
  const RemovalDelta* delta = nullptr;  // null for the initial state
  std::span<const std::vector<std::uint64_t>> panel_r;
};

using StepObserver = std::function<void(const StepEvent&)>;

struct RunOutcome {
  ProcessTrace trace;
  Graph graph;  // state when the run stopped
};

// Runs one trial. Identical configs give identical traces.
RunOutcome simulate(const RunConfig& cfg, const StepObserver& observer = {});
ProcessTrace run(const RunConfig& cfg, const StepObserver& observer = {});

// Exact R values of the panel sets on g.
std::vector<std::uint64_t> panel_r_values(const Graph& g, std::span<const VertexSet> panel, int k);

// Hitting time M, or nullopt when the run stopped before the graph became K_k-free.
std::optional<std::uint64_t> hitting_time(const ProcessTrace& trace);

// One-step decrease of R_{k,U} caused by deleting the edges of `removed`,
// computed from the graph before the deletion and the bitset of N_U.
std::uint64_t panel_drop(const Graph& before, const VertexSet& u, const Bitset& common,
                         const VertexSet& removed, int k);

void write_trace_csv(std::ostream& os, const ProcessTrace& trace);
nlohmann::json trace_summary_json(const ProcessTrace& trace);

}  // namespace krsim
