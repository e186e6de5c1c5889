#include <doctest.h>

#include <cmath>

#include "krsim/config_io.hpp"
#include "krsim/ensemble.hpp"

using namespace krsim;

TEST_CASE("K_6 ensemble is deterministic in outcome") {
  RunConfig cfg;
  cfg.n = 6;
  cfg.k = 4;
  const EnsembleReport r = run_ensemble({cfg}, 10, 77);
  REQUIRE(r.grid.size() == 1);
  CHECK(r.grid[0].completed == 10);
  for (const auto& t : r.grid[0].trials) {
    CHECK(*t.hitting_time == 1);
    CHECK(*t.final_edges == 9);
  }
  CHECK(r.fit_errors.at(4).find("3 distinct") != std::string::npos);
}

TEST_CASE("zero trials give an undefined report") {
  RunConfig cfg;
  cfg.n = 10;
  const EnsembleReport r = run_ensemble({cfg}, 0, 1);
  CHECK(r.undefined);
  CHECK_FALSE(r.grid[0].score.defined);
  CHECK_FALSE(r.grid[0].score.envelope_hit_rate);
}

TEST_CASE("same master seed, same JSON, regardless of threads") {
  std::vector<RunConfig> grid;
  for (std::size_t n : {12u, 16u, 20u}) {
    RunConfig c;
    c.n = n;
    c.k = 3;
    grid.push_back(c);
  }
  EnsembleOptions one;
  EnsembleOptions four;
  four.threads = 4;
  const auto a = run_ensemble(grid, 5, 3, one).to_json(one).dump();
  const auto b = run_ensemble(grid, 5, 3, four).to_json(one).dump();
  CHECK(a == b);
  const auto c = run_ensemble(grid, 5, 4, one).to_json(one).dump();
  CHECK(a != c);
}

TEST_CASE("engine errors are recorded per trial") {
  RunConfig cfg;
  cfg.n = 400;
  cfg.k = 4;
  cfg.index = IndexKind::materialized;
  cfg.memory_budget_bytes = 1024;
  const EnsembleReport r = run_ensemble({cfg}, 2, 1);
  CHECK(r.grid[0].trials[0].error.has_value());
  CHECK(r.grid[0].completed == 0);
}

TEST_CASE("initial checkpoint deviation is the exact binomial ratio") {
  RunConfig cfg;
  cfg.n = 100;
  cfg.k = 4;
  cfg.max_steps = 0;
  cfg.panel_sizes = {{2, 5}, {3, 5}};
  const ProcessTrace t = run(cfg);
  const ConcentrationScore s = concentration_score({&t}, TrajectoryParams::defaults(4, 100));
  REQUIRE(s.defined);
  const double expect = 1 - 3921225.0 * 24 / 1e8;
  CHECK(expect == doctest::Approx(0.058906).epsilon(1e-6));
  CHECK(s.observables[0].max_rel_dev == doctest::Approx(expect).epsilon(1e-12));
  CHECK(concentration_score({}, TrajectoryParams::defaults(4, 100)).note == "no traces");
}

TEST_CASE("k = 3 is scored by relative deviation only") {
  RunConfig cfg;
  cfg.n = 30;
  cfg.k = 3;
  const ProcessTrace t = run(cfg);
  TrajectoryParams p;
  p.k = 3;
  const ConcentrationScore s = concentration_score({&t}, p);
  CHECK(s.defined);
  CHECK_FALSE(s.envelope_hit_rate);
  CHECK(s.observables.size() == 2);
  CHECK_FALSE(s.observables[0].band_defined);
}

TEST_CASE("exponent fit") {
  std::vector<std::pair<double, double>> pts;
  for (double n : {50.0, 100.0, 200.0, 400.0}) pts.emplace_back(n, std::pow(n, 1.9));
  const ExponentFit f = exponent_fit(pts);
  CHECK(f.slope == doctest::Approx(1.9).epsilon(1e-9));
  CHECK(f.stderr_slope < 1e-9);
  CHECK_THROWS_AS(exponent_fit({{10, 5}, {10, 6}, {20, 9}}), std::invalid_argument);
  pts = {{10, 12}, {20, 30}, {40, 61}, {80, 150}};
  const ExponentFit g = exponent_fit(pts);
  CHECK(g.ci_low < g.slope);
  CHECK(g.slope < g.ci_high);
  CHECK(g.stderr_slope > 0);
}

TEST_CASE("JSON config with flag-style overrides") {
  HarnessConfig cfg;
  apply_json(cfg, nlohmann::json::parse(R"({"n": [60, 90], "k": 4, "panel": {"2": 10, "3": 20},
                                             "stop": "p_floor", "p_floor": 0.5, "gamma": {"2": 0.8}})"));
  CHECK(cfg.ns == std::vector<std::size_t>{60, 90});
  CHECK(cfg.base.panel_size(3) == 20);
  CHECK(cfg.base.stop == StopRule::at_p_floor);
  CHECK(cfg.gamma.at(2) == 0.8);
  CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"nn": 4})")), std::invalid_argument);
  const auto j = to_json(cfg.base);
  CHECK(j["panel"]["2"] == 10);
}
