#include "krsim/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "krsim/rng.hpp"

namespace krsim {

namespace {

using nlohmann::json;

struct Accumulator {
  std::uint64_t checkpoints = 0;
  std::uint64_t inside = 0;
  double max_dev = 0;
  double sum_dev = 0;

  void add(double dev, bool in_band) {
    ++checkpoints;
    inside += in_band ? 1 : 0;
    max_dev = std::max(max_dev, dev);
    sum_dev += dev;
  }
};

void widen(std::map<std::string, ResidualRange>& ranges, const std::string& name, double v) {
  auto [it, fresh] = ranges.try_emplace(name, ResidualRange{v, v});
  if (!fresh) {
    it->second.min = std::min(it->second.min, v);
    it->second.max = std::max(it->second.max, v);
  }
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::optional<double> median_of(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt_json(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

json score_json(const ConcentrationScore& s) {
  json j;
  j["defined"] = s.defined;
  if (!s.note.empty()) j["note"] = s.note;
  j["envelope_hit_rate"] = opt_json(s.envelope_hit_rate);
  j["tracking_checkpoints"] = s.tracking_checkpoints;
  j["tracking_passed"] = s.tracking_passed;
  j["tracking_rate"] = opt_json(s.tracking_rate);
  json obs = json::array();
  for (const auto& o : s.observables) {
    json buckets = json::array();
    for (const auto& b : o.buckets) {
      json bj = {{"p_lo", b.p_lo}, {"p_hi", b.p_hi}, {"checkpoints", b.checkpoints},
                 {"max_rel_dev", b.max_rel_dev}, {"mean_rel_dev", b.mean_rel_dev}};
      if (o.band_defined) {
        bj["inside"] = b.inside;
        bj["hit_rate"] = b.checkpoints ? json(static_cast<double>(b.inside) / static_cast<double>(b.checkpoints))
                                       : json(nullptr);
      }
      buckets.push_back(bj);
    }
    obs.push_back({{"observable", o.name}, {"band_defined", o.band_defined}, {"checkpoints", o.checkpoints},
                   {"inside", o.inside}, {"max_rel_dev", o.max_rel_dev}, {"buckets", buckets}});
  }
  j["observables"] = obs;
  json res = json::object();
  for (const auto& [name, r] : s.residuals) res[name] = {{"min", r.min}, {"max", r.max}};
  j["residuals"] = res;
  return j;
}

json checkpoint_json(const Checkpoint& cp) {
  json panel = json::array();
  for (const auto& st : cp.panel) panel.push_back({{"mean", st.mean}, {"min", st.min}, {"max", st.max}});
  json j = {{"i", cp.step}, {"p", cp.p}, {"edges", cp.edges}, {"q_k", cp.q_k}, {"panel", panel}};
  if (!cp.extremes.empty()) {
    json ex = json::array();
    for (const auto& e : cp.extremes) ex.push_back({{"min", e.min}, {"max", e.max}});
    j["extremes"] = ex;
  }
  return j;
}

}  // namespace

ConcentrationScore concentration_score(const std::vector<const ProcessTrace*>& traces, const TrajectoryParams& params,
                                       const TrackingThresholds& thresholds, double bucket_width) {
  ConcentrationScore out;
  if (traces.empty()) {
    out.note = "no traces";
    return out;
  }
  if (!(bucket_width > 0 && bucket_width <= 1)) throw std::invalid_argument("bucket width must lie in (0, 1]");
  const std::size_t n = traces.front()->n;
  const int k = traces.front()->k;
  for (const ProcessTrace* t : traces) {
    if (t->n != n || t->k != k) throw std::invalid_argument("concentration_score: traces must share (n, k)");
  }
  TrajectoryParams tp = params;
  tp.n = static_cast<double>(n);
  tp.k = k;
  const bool bands = k >= 4;
  if (bands) tp.validate();
  if (!bands) out.note = "k < 4: envelope bands undefined, relative deviations only";
  out.defined = true;

  const std::size_t nbuckets = static_cast<std::size_t>(std::ceil((1.0 - tp.p_floor) / bucket_width - 1e-9)) + 1;
  const std::size_t nobs = static_cast<std::size_t>(k - 1);  // q, then r for m = 2..k-1
  std::vector<std::vector<Accumulator>> acc(nobs, std::vector<Accumulator>(nbuckets));
  const double nn = static_cast<double>(n);

  for (const ProcessTrace* t : traces) {
    for (const Checkpoint& cp : t->checkpoints) {
      if (cp.p < tp.p_floor - 1e-12 || cp.p <= 0) continue;
      const std::size_t b = std::min(nbuckets - 1, static_cast<std::size_t>(std::floor((1.0 - cp.p) / bucket_width + 1e-9)));
      std::optional<Envelopes> env;
      if (bands) env = envelopes(tp, cp.p);

      const double q = static_cast<double>(cp.q_k);
      const double qt = q_traj(cp.p, nn, k);
      const double qdev = std::abs(q / qt - 1.0);
      acc[0][b].add(qdev, bands && q >= env->q_lower && q <= env->q_upper);
      bool track_ok = qdev <= thresholds.q_tolerance;

      std::vector<double> r_lo;
      std::vector<double> r_hi;
      for (int m = 2; m <= k - 1; ++m) {
        const std::size_t mi = static_cast<std::size_t>(m - 2);
        if (t->panel.size() <= mi || t->panel[mi].empty()) continue;
        const PanelStats& st = cp.panel[mi];
        const double rt = r_traj(cp.p, nn, k, m);
        const double rdev = std::abs(st.mean / rt - 1.0);
        bool in_band = false;
        if (bands) {
          in_band = static_cast<double>(st.min) >= rt - env->r_band[mi] && static_cast<double>(st.max) <= rt + env->r_band[mi];
        }
        acc[mi + 1][b].add(rdev, in_band);
        track_ok = track_ok && rdev <= thresholds.r_tolerance;
        r_lo.push_back(static_cast<double>(st.min));
        r_hi.push_back(static_cast<double>(st.max));
      }
      if (cp.p >= thresholds.p_min - 1e-12) {
        ++out.tracking_checkpoints;
        out.tracking_passed += track_ok ? 1 : 0;
      }
      if (bands && r_lo.size() == static_cast<std::size_t>(k - 2)) {
        const Residuals lo = residuals(tp, cp.p, q, r_lo);
        const Residuals hi = residuals(tp, cp.p, q, r_hi);
        widen(out.residuals, "U", lo.u);
        widen(out.residuals, "L", lo.l);
        for (std::size_t mi = 0; mi < lo.z.size(); ++mi) {
          const std::string name = "Z_m" + std::to_string(mi + 2);
          widen(out.residuals, name, lo.z[mi]);
          widen(out.residuals, name, hi.z[mi]);
        }
      } else if (bands) {
        const Residuals r = residuals(tp, cp.p, q, {});
        widen(out.residuals, "U", r.u);
        widen(out.residuals, "L", r.l);
      }
    }
  }

  std::uint64_t pairs = 0;
  std::uint64_t inside = 0;
  for (std::size_t o = 0; o < nobs; ++o) {
    ObservableScore os;
    os.name = o == 0 ? "q" : "r_m" + std::to_string(o + 1);
    os.band_defined = bands;
    for (std::size_t b = 0; b < nbuckets; ++b) {
      const Accumulator& a = acc[o][b];
      BucketScore bs;
      bs.p_hi = 1.0 - static_cast<double>(b) * bucket_width;
      bs.p_lo = std::max(tp.p_floor, bs.p_hi - bucket_width);
      bs.checkpoints = a.checkpoints;
      bs.inside = a.inside;
      bs.max_rel_dev = a.max_dev;
      bs.mean_rel_dev = a.checkpoints ? a.sum_dev / static_cast<double>(a.checkpoints) : 0.0;
      os.checkpoints += a.checkpoints;
      os.inside += a.inside;
      os.max_rel_dev = std::max(os.max_rel_dev, a.max_dev);
      if (a.checkpoints) os.buckets.push_back(bs);
    }
    pairs += os.checkpoints;
    inside += os.inside;
    out.observables.push_back(std::move(os));
  }
  if (bands && pairs > 0) out.envelope_hit_rate = static_cast<double>(inside) / static_cast<double>(pairs);
  if (out.tracking_checkpoints > 0) {
    out.tracking_rate = static_cast<double>(out.tracking_passed) / static_cast<double>(out.tracking_checkpoints);
  }
  return out;
}

ExponentFit exponent_fit(const std::vector<std::pair<double, double>>& n_and_y) {
  std::set<double> distinct;
  for (const auto& [n, y] : n_and_y) {
    if (!(n > 0) || !(y > 0)) throw std::invalid_argument("exponent_fit: n and y must be positive");
    distinct.insert(n);
  }
  if (distinct.size() < 3) throw std::invalid_argument("exponent_fit: need at least 3 distinct n");
  const double count = static_cast<double>(n_and_y.size());
  double mx = 0;
  double my = 0;
  for (const auto& [n, y] : n_and_y) {
    mx += std::log(n);
    my += std::log(y);
  }
  mx /= count;
  my /= count;
  double sxx = 0;
  double sxy = 0;
  for (const auto& [n, y] : n_and_y) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  ExponentFit fit;
  fit.points = n_and_y.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0;
  for (const auto& [n, y] : n_and_y) {
    const double e = std::log(y) - (fit.intercept + fit.slope * std::log(n));
    sse += e * e;
  }
  const double dof = count - 2;
  fit.stderr_slope = std::sqrt(sse / dof / sxx);
  const boost::math::students_t dist(dof);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.ci_low = fit.slope - t * fit.stderr_slope;
  fit.ci_high = fit.slope + t * fit.stderr_slope;
  return fit;
}

EnsembleReport run_ensemble(const std::vector<RunConfig>& grid, std::size_t trials, std::uint64_t master_seed,
                            const EnsembleOptions& options) {
  for (const RunConfig& cfg : grid) cfg.validate();
  EnsembleReport report;
  report.master_seed = master_seed;
  report.trials = trials;
  report.undefined = trials == 0 || grid.empty();
  report.grid.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    report.grid[g].config = grid[g];
    report.grid[g].trials.resize(trials);
  }

  const std::size_t jobs = grid.size() * trials;
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t g = job / trials;
      const std::size_t t = job % trials;
      TrialResult& out = report.grid[g].trials[t];
      out.trial = t;
      out.seed = derive_seed(master_seed, {g, t});
      RunConfig cfg = grid[g];
      cfg.seed = out.seed;
      try {
        StepObserver obs;
        if (options.observer_factory) obs = options.observer_factory(g, t);
        out.trace = run(cfg, obs);
        out.hitting_time = out.trace.hitting_time;
        out.final_edges = out.trace.final_edge_count;
        out.steps = out.trace.steps;
        out.max_step_drop_q = out.trace.max_step_drop_q;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, jobs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < threads; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::map<int, std::vector<std::pair<double, double>>> fit_points;
  for (GridResult& gr : report.grid) {
    std::vector<double> edges;
    std::vector<double> hits;
    std::vector<const ProcessTrace*> traces;
    for (const TrialResult& tr : gr.trials) {
      if (tr.error) continue;
      traces.push_back(&tr.trace);
      if (tr.final_edges) {
        edges.push_back(static_cast<double>(*tr.final_edges));
        hits.push_back(static_cast<double>(*tr.hitting_time));
      }
    }
    gr.completed = edges.size();
    gr.mean_final_edges = mean_of(edges);
    gr.median_final_edges = median_of(edges);
    gr.mean_hitting_time = mean_of(hits);
    TrajectoryParams tp;
    tp.k = gr.config.k;
    tp.n = static_cast<double>(gr.config.n);
    tp.lambda = options.lambda;
    tp.mu = options.mu;
    tp.gamma = options.gamma;
    tp.p_floor = options.p_floor;
    try {
      gr.score = concentration_score(traces, tp, options.thresholds);
    } catch (const std::exception& e) {
      gr.score = {};
      gr.score.note = e.what();
    }
    if (gr.mean_final_edges && *gr.mean_final_edges > 0) {
      fit_points[gr.config.k].emplace_back(static_cast<double>(gr.config.n), *gr.mean_final_edges);
    }
  }
  std::set<int> ks;
  for (const RunConfig& cfg : grid) ks.insert(cfg.k);
  for (int k : ks) {
    try {
      report.fits[k] = exponent_fit(fit_points[k]);
    } catch (const std::exception& e) {
      report.fit_errors[k] = e.what();
    }
  }
  return report;
}

json EnsembleReport::to_json(const EnsembleOptions& options) const {
  json j;
  j["master_seed"] = master_seed;
  j["trials"] = trials;
  j["undefined"] = undefined;
  json gamma = json::object();
  for (const auto& [m, g] : options.gamma) gamma[std::to_string(m)] = g;
  j["trajectory_params"] = {{"lambda", options.lambda}, {"mu", options.mu}, {"gamma", gamma}, {"p_floor", options.p_floor}};
  j["tracking_thresholds"] = {{"p_min", options.thresholds.p_min},
                              {"q_tolerance", options.thresholds.q_tolerance},
                              {"r_tolerance", options.thresholds.r_tolerance}};
  j["note"] = "envelope bands are asymptotic statements; at desk-scale n they are reported, not asserted";
  json grid_json = json::array();
  for (const GridResult& gr : grid) {
    const RunConfig& c = gr.config;
    json panel = json::object();
    for (int m = 2; m <= c.k - 1; ++m) panel[std::to_string(m)] = c.panel_size(m);
    json g;
    g["config"] = {{"n", c.n}, {"k", c.k}, {"stride", c.effective_stride()}, {"stop", to_string(c.stop)},
                   {"p_floor", c.p_floor}, {"index", to_string(c.index)}, {"panel", panel}, {"p_start", c.p_start}};
    g["completed"] = gr.completed;
    g["mean_final_edges"] = opt_json(gr.mean_final_edges);
    g["median_final_edges"] = opt_json(gr.median_final_edges);
    g["mean_hitting_time"] = opt_json(gr.mean_hitting_time);
    const double n2 = static_cast<double>(c.n) * static_cast<double>(c.n);
    g["mean_final_edges_over_n2"] = gr.mean_final_edges ? json(*gr.mean_final_edges / n2) : json(nullptr);
    g["score"] = score_json(gr.score);
    json tj = json::array();
    for (const TrialResult& tr : gr.trials) {
      json t = {{"trial", tr.trial}, {"seed", tr.seed}, {"M", opt_json(tr.hitting_time)},
                {"final_edges", opt_json(tr.final_edges)}, {"steps", tr.steps},
                {"max_step_drop_q", tr.max_step_drop_q}, {"error", tr.error ? json(*tr.error) : json(nullptr)}};
      if (options.include_checkpoints) {
        json cps = json::array();
        for (const Checkpoint& cp : tr.trace.checkpoints) cps.push_back(checkpoint_json(cp));
        t["checkpoints"] = cps;
      }
      tj.push_back(t);
    }
    g["trials"] = tj;
    grid_json.push_back(g);
  }
  j["grid"] = grid_json;
  json fits_json = json::object();
  for (const auto& [k, f] : fits) {
    fits_json[std::to_string(k)] = {{"slope", f.slope},
                                    {"intercept", f.intercept},
                                    {"stderr", f.stderr_slope},
                                    {"ci95", {f.ci_low, f.ci_high}},
                                    {"points", f.points},
                                    {"bound_exponent", final_size_exponent(k)}};
  }
  for (const auto& [k, msg] : fit_errors) fits_json[std::to_string(k)] = {{"error", msg}};
  j["fits"] = fits_json;
  return j;
}

}  // namespace krsim
