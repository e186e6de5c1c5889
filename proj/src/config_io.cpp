#include "krsim/config_io.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace krsim {

namespace {

std::size_t panel_value(const nlohmann::json& v) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw std::invalid_argument("config: panel sizes must be non-negative integers");
  }
  return v.get<std::size_t>();
}

}  // namespace

void apply_json(HarnessConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  static const std::set<std::string> known = {
      "n", "k", "seed", "stride", "panel", "stop", "p_floor", "index", "record_full_extremes", "p_start",
      "max_steps", "memory_budget_mib", "trials", "threads", "lambda", "mu", "gamma"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.contains(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  RunConfig& r = cfg.base;
  if (j.contains("n")) {
    const auto& n = j.at("n");
    cfg.ns.clear();
    if (n.is_array()) {
      for (const auto& v : n) cfg.ns.push_back(v.get<std::size_t>());
      if (cfg.ns.empty()) throw std::invalid_argument("config: n list is empty");
      r.n = cfg.ns.front();
    } else {
      r.n = n.get<std::size_t>();
    }
  }
  if (j.contains("k")) r.k = j.at("k").get<int>();
  if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("stride")) r.checkpoint_stride = j.at("stride").get<std::uint64_t>();
  if (j.contains("panel")) {
    const auto& p = j.at("panel");
    r.panel_sizes.clear();
    if (p.is_object()) {
      for (const auto& [m, size] : p.items()) r.panel_sizes[std::stoi(m)] = panel_value(size);
    } else {
      const std::size_t size = panel_value(p);
      for (int m = 2; m <= std::max(2, r.k - 1); ++m) r.panel_sizes[m] = size;
    }
  }
  if (j.contains("stop")) r.stop = parse_stop_rule(j.at("stop").get<std::string>());
  if (j.contains("p_floor")) r.p_floor = j.at("p_floor").get<double>();
  if (j.contains("index")) r.index = parse_index_kind(j.at("index").get<std::string>());
  if (j.contains("record_full_extremes")) r.record_full_extremes = j.at("record_full_extremes").get<bool>();
  if (j.contains("p_start")) r.p_start = j.at("p_start").get<double>();
  if (j.contains("max_steps")) {
    const auto& v = j.at("max_steps");
    r.max_steps = v.is_null() ? std::nullopt : std::optional<std::uint64_t>(v.get<std::uint64_t>());
  }
  if (j.contains("memory_budget_mib")) r.memory_budget_bytes = j.at("memory_budget_mib").get<std::uint64_t>() << 20;
  if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<std::size_t>();
  if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
  if (j.contains("mu")) cfg.mu = j.at("mu").get<double>();
  if (j.contains("gamma")) {
    cfg.gamma.clear();
    for (const auto& [m, g] : j.at("gamma").items()) cfg.gamma[std::stoi(m)] = g.get<double>();
  }
}

HarnessConfig load_harness_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  HarnessConfig cfg;
  apply_json(cfg, nlohmann::json::parse(in));
  return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json panel = nlohmann::json::object();
  for (int m = 2; m <= cfg.k - 1; ++m) panel[std::to_string(m)] = cfg.panel_size(m);
  return {{"n", cfg.n},
          {"k", cfg.k},
          {"seed", cfg.seed},
          {"stride", cfg.effective_stride()},
          {"panel", panel},
          {"stop", to_string(cfg.stop)},
          {"p_floor", cfg.p_floor},
          {"index", to_string(cfg.index)},
          {"record_full_extremes", cfg.record_full_extremes},
          {"p_start", cfg.p_start},
          {"max_steps", cfg.max_steps ? nlohmann::json(*cfg.max_steps) : nlohmann::json(nullptr)},
          {"memory_budget_mib", cfg.memory_budget_bytes >> 20}};
}

}  // namespace krsim
