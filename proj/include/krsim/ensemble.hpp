#pragma once
// Many independent trials over a grid of configurations, scored against the
// predicted trajectories, plus the power-law fit of the final edge count.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "krsim/process.hpp"
#include "krsim/trajectory.hpp"

namespace krsim {

struct TrackingThresholds {
  double p_min = 0.5;
  double q_tolerance = 0.10;
  double r_tolerance = 0.15;
};

struct BucketScore {
  double p_lo = 0;
  double p_hi = 0;
  std::uint64_t checkpoints = 0;
  std::uint64_t inside = 0;  // inside the envelope band; only counted when k >= 4
  double max_rel_dev = 0;
  double mean_rel_dev = 0;
};

struct ObservableScore {
  std::string name;  // "q" or "r_m<m>"
  bool band_defined = false;
  std::vector<BucketScore> buckets;
  std::uint64_t checkpoints = 0;
  std::uint64_t inside = 0;
  double max_rel_dev = 0;
};

struct ResidualRange {
  double min = 0;
  double max = 0;
};

struct ConcentrationScore {
  bool defined = false;  // false for an empty trace list
  std::string note;
  std::vector<ObservableScore> observables;
  // Envelope hit rate over (checkpoint, observable) pairs with p >= p_floor.
  std::optional<double> envelope_hit_rate;
  // Fraction of checkpoints with p >= thresholds.p_min where the Q deviation
  // and every panel-mean R deviation are within tolerance.
  std::uint64_t tracking_checkpoints = 0;
  std::uint64_t tracking_passed = 0;
  std::optional<double> tracking_rate;
  std::map<std::string, ResidualRange> residuals;  // "U", "L", "Z_m<m>"; k >= 4
};

// Traces must share (n, k). Bands come from params when k >= 4; for k = 3
// only relative deviations are scored.
ConcentrationScore concentration_score(const std::vector<const ProcessTrace*>& traces, const TrajectoryParams& params,
                                       const TrackingThresholds& thresholds = {}, double bucket_width = 0.05);

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  double ci_low = 0;   // 95 %
  double ci_high = 0;
  std::size_t points = 0;
};

// Least squares of log y against log n. Needs >= 3 distinct n, all y > 0.
ExponentFit exponent_fit(const std::vector<std::pair<double, double>>& n_and_y);

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> error;
  std::optional<std::uint64_t> hitting_time;
  std::optional<std::uint64_t> final_edges;
  std::uint64_t steps = 0;
  std::uint64_t max_step_drop_q = 0;
  ProcessTrace trace;
};

struct GridResult {
  RunConfig config;
  std::vector<TrialResult> trials;
  std::size_t completed = 0;  // reached the hitting time
  std::optional<double> mean_final_edges;
  std::optional<double> median_final_edges;
  std::optional<double> mean_hitting_time;
  ConcentrationScore score;
};

struct EnsembleOptions {
  std::size_t threads = 1;
  double lambda = 1.0;
  double mu = 2.0;
  std::map<int, double> gamma;
  double p_floor = 0.3;
  TrackingThresholds thresholds;
  bool include_checkpoints = false;  // copy every checkpoint into the JSON
  // Optional per-trial observer, called from the worker running that trial.
  std::function<StepObserver(std::size_t grid_index, std::size_t trial)> observer_factory;
};

struct EnsembleReport {
  std::uint64_t master_seed = 0;
  std::size_t trials = 0;
  bool undefined = false;  // no trials ran
  std::vector<GridResult> grid;
  std::map<int, ExponentFit> fits;           // by k
  std::map<int, std::string> fit_errors;     // by k
  nlohmann::json to_json(const EnsembleOptions& options) const;
};

// Trial t of grid entry g uses seed derive_seed(master_seed, {g, t}); the
// config's own seed is ignored.
EnsembleReport run_ensemble(const std::vector<RunConfig>& grid, std::size_t trials, std::uint64_t master_seed,
                            const EnsembleOptions& options = {});

}  // namespace krsim
