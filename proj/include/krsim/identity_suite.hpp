#pragma once
// Runs every exact identity from krsim/identities.hpp over a family of small
// graphs: K_n, K_n minus random edge sets, and states harvested from short
// process runs. Backs the `verify` subcommand.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace krsim {

struct SuiteOptions {
  std::size_t max_n = 10;
  std::vector<int> ks{3, 4, 5};
  std::size_t destroying_max_n = 8;  // the destroying-count checks are the slow part
  std::uint64_t seed = 1;
  std::size_t random_graphs = 6;     // per (n, k)
  std::size_t process_states = 3;    // per (n, k)
  std::size_t max_counterexamples = 5;
};

struct IdentityResult {
  std::string name;
  std::uint64_t instances = 0;
  std::uint64_t failures = 0;
  std::vector<nlohmann::json> counterexamples;
};

struct SuiteReport {
  std::uint64_t graphs = 0;
  std::vector<IdentityResult> results;
  bool passed() const;
  nlohmann::json to_json() const;
};

SuiteReport run_identity_suite(const SuiteOptions& options);

}  // namespace krsim
