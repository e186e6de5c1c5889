#pragma once
// JSON configuration files for the harness. The layout mirrors RunConfig:
//   {"n": 300 | [200, 300], "k": 4, "seed": 1, "stride": 0, "panel": 200 | {"2": 200},
//    "stop": "hitting_time" | "p_floor", "p_floor": 0.3, "index": "edge_weighted",
//    "record_full_extremes": false, "p_start": 1.0, "max_steps": null,
//    "memory_budget_mib": 2048, "trials": 20, "threads": 1,
//    "lambda": 1, "mu": 2, "gamma": {"2": 1, "3": 1}}

#include <string>
#include <vector>

#include <json.hpp>

#include "krsim/process.hpp"

namespace krsim {

struct HarnessConfig {
  RunConfig base;
  std::vector<std::size_t> ns;  // empty -> base.n alone
  std::size_t trials = 1;
  std::size_t threads = 1;
  double lambda = 1.0;
  double mu = 2.0;
  std::map<int, double> gamma;
};

// Unknown keys are rejected so typos do not pass silently.
void apply_json(HarnessConfig& cfg, const nlohmann::json& j);
HarnessConfig load_harness_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace krsim
