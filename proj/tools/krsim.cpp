// Command-line front end: single runs, ensembles, identity verification,
// trajectory curves and tail-bound tables.

#include <array>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "krsim/config_io.hpp"
#include "krsim/ensemble.hpp"
#include "krsim/identity_suite.hpp"
#include "krsim/process.hpp"
#include "krsim/simd/bit_kernels.hpp"
#include "krsim/tail_bounds.hpp"
#include "krsim/trajectory.hpp"

namespace {

using nlohmann::json;
using namespace krsim;

constexpr int kMaxGammaFlag = 6;

struct CommonFlags {
  std::string config;
  std::vector<std::size_t> n;
  int k = 4;
  std::uint64_t seed = 1;
  std::uint64_t stride = 0;
  std::size_t panel = kDefaultPanelSize;
  double p_floor = 0.3;
  std::string stop = "hitting_time";
  std::string index = "edge_weighted";
  double lambda = 1.0;
  double mu = 2.0;
  std::array<double, kMaxGammaFlag + 1> gamma{};
  std::string out;
  std::string format = "json";
  std::size_t trials = 1;
  std::size_t threads = 1;
  double p_start = 1.0;
  std::uint64_t max_steps = 0;
  bool extremes = false;

  CLI::App* app = nullptr;
  bool given(const std::string& flag) const { return app->count(flag) > 0; }
};

void add_run_flags(CLI::App* sub, CommonFlags& f) {
  f.app = sub;
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--n", f.n, "number of vertices (sweep accepts several)");
  sub->add_option("--k", f.k, "clique size removed per step");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--stride", f.stride, "checkpoint stride in steps (0 = default)");
  sub->add_option("--panel", f.panel, "tracked m-sets per m");
  sub->add_option("--p-floor", f.p_floor, "density floor for scoring / the p_floor stop rule");
  sub->add_option("--stop", f.stop, "hitting_time | p_floor");
  sub->add_option("--index", f.index, "edge_weighted | materialized");
  sub->add_option("--lambda", f.lambda, "lambda constant");
  sub->add_option("--mu", f.mu, "mu constant");
  for (int m = 2; m <= kMaxGammaFlag; ++m) {
    sub->add_option(fmt::format("--gamma{}", m), f.gamma[static_cast<std::size_t>(m)], fmt::format("gamma_{}", m));
  }
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--p-start", f.p_start, "start from K_n thinned to this density (approximation mode)");
  sub->add_option("--max-steps", f.max_steps, "stop after this many steps (0 = no limit)");
  sub->add_flag("--record-extremes", f.extremes, "exact min/max of R over all m-sets at checkpoints (small n)");
}

HarnessConfig resolve(const CommonFlags& f) {
  HarnessConfig cfg;
  if (!f.config.empty()) cfg = load_harness_config(f.config);
  RunConfig& r = cfg.base;
  if (f.given("--n")) {
    cfg.ns = f.n;
    r.n = f.n.front();
  }
  if (f.given("--k") || f.config.empty()) r.k = f.k;
  if (f.given("--seed") || f.config.empty()) r.seed = f.seed;
  if (f.given("--stride")) r.checkpoint_stride = f.stride;
  if (f.given("--panel")) {
    r.panel_sizes.clear();
    for (int m = 2; m <= r.k - 1; ++m) r.panel_sizes[m] = f.panel;
  }
  if (f.given("--p-floor")) r.p_floor = f.p_floor;
  if (f.given("--stop")) r.stop = parse_stop_rule(f.stop);
  if (f.given("--index")) r.index = parse_index_kind(f.index);
  if (f.given("--lambda")) cfg.lambda = f.lambda;
  if (f.given("--mu")) cfg.mu = f.mu;
  for (int m = 2; m <= kMaxGammaFlag; ++m) {
    if (f.given(fmt::format("--gamma{}", m))) cfg.gamma[m] = f.gamma[static_cast<std::size_t>(m)];
  }
  if (f.given("--p-start")) r.p_start = f.p_start;
  if (f.given("--max-steps") && f.max_steps > 0) r.max_steps = f.max_steps;
  if (f.given("--record-extremes")) r.record_full_extremes = f.extremes;
  if (f.app->get_option_no_throw("--trials") && f.given("--trials")) cfg.trials = f.trials;
  if (f.app->get_option_no_throw("--threads") && f.given("--threads")) cfg.threads = f.threads;
  if (r.n == 0) throw std::invalid_argument("--n is required (flag or config)");
  return cfg;
}

TrajectoryParams trajectory_params(const HarnessConfig& cfg, std::size_t n) {
  TrajectoryParams tp = TrajectoryParams::defaults(cfg.base.k, static_cast<double>(n));
  tp.lambda = cfg.lambda;
  tp.mu = cfg.mu;
  for (const auto& [m, g] : cfg.gamma) tp.gamma[m] = g;
  tp.p_floor = cfg.base.p_floor;
  return tp;
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os << text;
}

int cmd_run(const CommonFlags& f) {
  const HarnessConfig cfg = resolve(f);
  const ProcessTrace trace = run(cfg.base);
  std::ostringstream os;
  if (f.format == "csv") {
    write_trace_csv(os, trace);
  } else {
    json j = trace_summary_json(trace);
    j["config"] = to_json(cfg.base);
    j["simd"] = simd::isa_name(simd::active().isa);
    json cps = json::array();
    for (const Checkpoint& cp : trace.checkpoints) {
      json panel = json::array();
      for (const auto& st : cp.panel) panel.push_back({{"mean", st.mean}, {"min", st.min}, {"max", st.max}});
      cps.push_back({{"i", cp.step}, {"p", cp.p}, {"edges", cp.edges}, {"q_k", cp.q_k}, {"panel", panel}});
    }
    j["checkpoints"] = cps;
    os << j.dump(2) << '\n';
  }
  emit(f.out, os.str());
  std::cerr << trace_summary_json(trace).dump() << '\n';
  return 0;
}

int cmd_sweep(const CommonFlags& f) {
  const HarnessConfig cfg = resolve(f);
  std::vector<RunConfig> grid;
  const std::vector<std::size_t> ns = cfg.ns.empty() ? std::vector<std::size_t>{cfg.base.n} : cfg.ns;
  for (std::size_t n : ns) {
    RunConfig r = cfg.base;
    r.n = n;
    grid.push_back(r);
  }
  EnsembleOptions opt;
  opt.threads = cfg.threads;
  opt.lambda = cfg.lambda;
  opt.mu = cfg.mu;
  opt.gamma = cfg.gamma;
  opt.p_floor = cfg.base.p_floor;
  const EnsembleReport report = run_ensemble(grid, cfg.trials, cfg.base.seed, opt);
  std::ostringstream os;
  if (f.format == "csv") {
    os << "n,k,trials,completed,mean_final_edges,median_final_edges,mean_hitting_time,tracking_rate,envelope_hit_rate\n";
    const auto cell = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); };
    for (const GridResult& g : report.grid) {
      os << fmt::format("{},{},{},{},{},{},{},{},{}\n", g.config.n, g.config.k, g.trials.size(), g.completed,
                        cell(g.mean_final_edges), cell(g.median_final_edges), cell(g.mean_hitting_time),
                        cell(g.score.tracking_rate), cell(g.score.envelope_hit_rate));
    }
  } else {
    os << report.to_json(opt).dump(2) << '\n';
  }
  emit(f.out, os.str());
  return 0;
}

int cmd_curves(const CommonFlags& f) {
  const HarnessConfig cfg = resolve(f);
  const TrajectoryParams tp = trajectory_params(cfg, cfg.base.n);
  std::ostringstream os;
  if (f.format == "csv") {
    write_curves_csv(os, tp, 141);
  } else {
    const Horizon h = i0_p0(tp);
    const UsableWindow w = usable_window(tp);
    const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json j = {{"n", tp.n},
              {"k", tp.k},
              {"lambda", tp.lambda},
              {"mu", tp.mu},
              {"alpha", alpha(tp.k)},
              {"b_constant", b_constant(tp.k)},
              {"i0", h.i0},
              {"p0", h.p0},
              {"vacuous_at_this_n", h.vacuous},
              {"p0_below_one_from_log_n", p0_threshold_log_n(tp.k, tp.lambda)},
              {"final_size_bound", final_size_bound(tp)},
              {"final_size_exponent", final_size_exponent(tp.k)},
              {"barrier_p", barrier_p(tp.k, tp.n)},
              {"usable_window", {{"upper_from", opt(w.upper_from)}, {"lower_from", opt(w.lower_from)}}}};
    json betas = json::object();
    for (int m = 2; m <= tp.k - 1; ++m) betas[std::to_string(m)] = beta(tp.k, m);
    j["beta"] = betas;
    os << j.dump(2) << '\n';
  }
  emit(f.out, os.str());
  return 0;
}

int cmd_report(const CommonFlags& f, double constant_c) {
  const HarnessConfig cfg = resolve(f);
  const TrajectoryParams tp = trajectory_params(cfg, cfg.base.n);
  const UnionBound ub = extension_union_bound(tp, constant_c);
  std::ostringstream os;
  if (f.format == "csv") {
    os << "m,xi,log_term,term,theta_exponent,derived_exponent\n";
    for (const auto& t : ub.terms) {
      os << fmt::format("{},{},{},{},{},{}\n", t.m, t.xi, t.log_term, t.term, t.theta_exponent, t.derived_exponent);
    }
  } else {
    json terms = json::array();
    for (const auto& t : ub.terms) {
      terms.push_back({{"m", t.m}, {"xi", t.xi}, {"log_term", t.log_term}, {"term", t.term},
                       {"theta_exponent", t.theta_exponent}, {"derived_exponent", t.derived_exponent}});
    }
    const std::vector<double> unit(100, 1.0);
    json j = {{"n", tp.n},
              {"k", tp.k},
              {"constant_c", ub.constant_c},
              {"p0", ub.p0},
              {"p_used", ub.p_used},
              {"horizon_vacuous", ub.horizon_vacuous},
              {"terms", terms},
              {"log_total", ub.log_total},
              {"total", ub.total},
              {"increasing_in_m", ub.increasing_in_m},
              {"examples",
               {{"azuma(a=10, c=1 x100)", azuma_bound(10, unit)},
                {"bohman(a=10, l=100, eta=0.5, N=10)", bohman_bound(10, 100, 0.5, 10)},
                {"chernoff(n=100, p=0.5, xi=30)", chernoff_bound(100, 0.5, 30)}}}};
    os << j.dump(2) << '\n';
  }
  emit(f.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random K_k-removal process: simulation, verification and reference formulas"};
  app.require_subcommand(1);

  CommonFlags run_f;
  CommonFlags sweep_f;
  CommonFlags curves_f;
  CommonFlags report_f;
  auto* run_cmd = app.add_subcommand("run", "single trial -> CSV trace or JSON summary");
  add_run_flags(run_cmd, run_f);
  auto* sweep_cmd = app.add_subcommand("sweep", "ensemble over --n values -> report");
  add_run_flags(sweep_cmd, sweep_f);
  sweep_cmd->add_option("--trials", sweep_f.trials, "trials per n");
  sweep_cmd->add_option("--threads", sweep_f.threads, "worker threads");
  auto* curves_cmd = app.add_subcommand("curves", "trajectory and envelope curves");
  add_run_flags(curves_cmd, curves_f);
  auto* report_cmd = app.add_subcommand("report", "tail-bound tables");
  add_run_flags(report_cmd, report_f);
  double constant_c = 1.0;
  report_cmd->add_option("--constant-c", constant_c, "constant hidden in the union-bound exponent");

  auto* verify_cmd = app.add_subcommand("verify", "exact identity checks; exit 0 iff all pass");
  SuiteOptions suite;
  std::string verify_out;
  verify_cmd->add_option("--max-n", suite.max_n, "largest n in the graph family");
  verify_cmd->add_option("--destroying-max-n", suite.destroying_max_n, "largest n for the destroying-count checks");
  verify_cmd->add_option("--seed", suite.seed, "generator seed");
  verify_cmd->add_option("--k", suite.ks, "clique sizes");
  verify_cmd->add_option("--out", verify_out, "JSON report path (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return cmd_run(run_f);
    if (*sweep_cmd) return cmd_sweep(sweep_f);
    if (*curves_cmd) return cmd_curves(curves_f);
    if (*report_cmd) return cmd_report(report_f, constant_c);
    if (*verify_cmd) {
      const SuiteReport report = run_identity_suite(suite);
      emit(verify_out, report.to_json().dump(2) + "\n");
      std::cerr << (report.passed() ? "all identities hold" : "identity failures, see report") << '\n';
      return report.passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
