#include "krsim/trajectory.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "krsim/common.hpp"

namespace krsim {

namespace {

double pairs(int k) { return 0.5 * k * (k - 1); }

// coeff * n^e * p^f, falling back to log space if the direct product overflows.
double monomial(double coeff, double n, double e, double p, double f) {
  const double direct = coeff * std::pow(n, e) * std::pow(p, f);
  if (std::isfinite(direct) && direct != 0.0) return direct;
  if (p == 0.0) return f > 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::exp(std::log(coeff) + e * std::log(n) + f * std::log(p));
}

void require_envelope_k(int k, const char* what) {
  if (k < 4) throw std::invalid_argument(std::string(what) + " is defined for k >= 4 only");
  if (k > kMaxK) throw std::invalid_argument(std::string(what) + ": k too large");
}

void require_m(int k, int m) {
  if (m < 2 || m > k - 1) throw std::invalid_argument("m must lie in [2, k-1]");
}

void require_density(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("density must lie in (0, 1]");
}

}  // namespace

TrajectoryParams TrajectoryParams::defaults(int k, double n) {
  TrajectoryParams out;
  out.k = k;
  out.n = n;
  for (int m = 2; m <= k - 1; ++m) out.gamma[m] = 1.0;
  return out;
}

double TrajectoryParams::gamma_of(int m) const {
  const auto it = gamma.find(m);
  return it == gamma.end() ? 1.0 : it->second;
}

void TrajectoryParams::validate() const {
  require_envelope_k(k, "the tracking envelope");
  if (!(n >= k)) throw std::invalid_argument("n must be at least k");
  if (!(p_floor > 0.0 && p_floor <= 1.0)) throw std::invalid_argument("p_floor must lie in (0, 1]");
  const double c = pairs(k);
  if (!((c + 1) * lambda > mu + 2)) {
    throw std::invalid_argument(fmt::format("need (C(k,2)+1)·λ > μ+2, got {} <= {}", (c + 1) * lambda, mu + 2));
  }
  for (const auto& [m, g] : gamma) {
    (void)g;
    require_m(k, m);
  }
  for (int m = 2; m <= k - 1; ++m) {
    const double lhs = (c - pairs(m)) * lambda;
    if (!(lhs > gamma_of(m) + 1)) {
      throw std::invalid_argument(
          fmt::format("need (C(k,2)-C({0},2))·λ > γ_{0}+1, got {1} <= {2}", m, lhs, gamma_of(m) + 1));
    }
  }
  if (!(gamma_of(2) > 0.5)) throw std::invalid_argument("need γ_2 > 1/2");
}

double p_of(double i, std::size_t n, int k) {
  if (i < 0) throw std::invalid_argument("step index must be non-negative");
  const double nn = static_cast<double>(n);
  const double p = 1.0 - k * (k - 1.0) * i / (nn * nn);
  if (p < -1e-12) throw std::invalid_argument("step index beyond n^2/(k(k-1)) gives negative density");
  return p < 0 ? 0.0 : p;
}

double edges_expected(double i, std::size_t n, int k) {
  const double nn = static_cast<double>(n);
  return (nn * nn * p_of(i, n, k) - nn) / 2.0;
}

double q_traj(double p, double n, int k) {
  return monomial(1.0 / std::tgamma(k + 1.0), n, k, p, pairs(k));
}

double r_traj(double p, double n, int k, int m) {
  require_m(k, m);
  return monomial(1.0 / std::tgamma(k - m + 1.0), n, k - m, p, pairs(k) - pairs(m));
}

double sigma(double p, int k) {
  if (!(p > 0.0)) throw std::invalid_argument("sigma needs p > 0");
  return 1.0 - (k * (k - 1.0) / 4.0) * std::log(p);
}

double sigma_prime(double p, int k) {
  if (!(p > 0.0)) throw std::invalid_argument("sigma' needs p > 0");
  const double kk = k * (k - 1.0);
  return kk * kk / (4.0 * p);
}

Rational alpha_exact(int k) {
  require_envelope_k(k, "alpha");
  const long c = static_cast<long>(k) * (k - 1) / 2;
  return Rational(k) - Rational(c + 1, 2 * c - 2);
}

Rational beta_exact(int k, int m) {
  require_envelope_k(k, "beta");
  require_m(k, m);
  const long c = static_cast<long>(k) * (k - 1) / 2;
  const long cm = static_cast<long>(m) * (m - 1) / 2;
  return Rational(k - m) - Rational(c - cm, 2 * c - 2);
}

Rational b_constant_exact(int k) {
  require_envelope_k(k, "B");
  const long c = static_cast<long>(k) * (k - 1) / 2;
  long fact = 1;
  for (int j = 2; j <= k - 4; ++j) fact *= j;
  return Rational(1, 2) - Rational(1, 2 * c) + Rational(1, 3 * c * fact);
}

double alpha(int k) { return alpha_exact(k).convert_to<double>(); }
double beta(int k, int m) { return beta_exact(k, m).convert_to<double>(); }
double b_constant(int k) { return b_constant_exact(k).convert_to<double>(); }

Horizon i0_p0(const TrajectoryParams& params) {
  params.validate();
  const double n = params.n;
  const double kk = params.k * (params.k - 1.0);
  const double d = kk - 2.0;
  const double loglam = std::pow(std::log(n), params.lambda);
  Horizon h;
  h.p0 = std::cbrt(2.0) * std::pow(n, -1.0 / d) * loglam;
  h.i0 = n * n / kk - (std::cbrt(2.0) / kk) * std::pow(n, 2.0 - 1.0 / d) * loglam;
  h.vacuous = h.p0 >= 1.0 || h.i0 <= 0.0;
  return h;
}

double p0_threshold_log_n(int k, double lambda) {
  require_envelope_k(k, "p0 threshold");
  const double d = k * (k - 1.0) - 2.0;
  // log p0 as a function of x = ln n; negative means p0 < 1.
  const auto f = [&](double x) { return std::log(2.0) / 3.0 + lambda * std::log(x) - x / d; };
  const double peak = lambda * d;
  if (f(peak) <= 0) return 0.0;
  double hi = 2 * peak;
  while (f(hi) > 0) hi *= 2;
  const auto [a, b] = boost::math::tools::bisect(
      f, peak, hi, boost::math::tools::eps_tolerance<double>(50));
  return 0.5 * (a + b);
}

Envelopes envelopes(const TrajectoryParams& params, double p) {
  params.validate();
  require_density(p);
  const int k = params.k;
  const double n = params.n;
  const double logn = std::log(n);
  const double s = sigma(p, k);
  Envelopes e;
  e.q_traj = q_traj(p, n, k);
  e.q_upper = e.q_traj + monomial(0.5, n, k - 1, p, pairs(k) - 4);
  e.q_lower = e.q_traj - s * s * std::pow(n, alpha(k)) / p * std::pow(logn, params.mu);
  for (int m = 2; m <= k - 1; ++m) {
    e.r_traj.push_back(r_traj(p, n, k, m));
    e.r_band.push_back(s * std::pow(n, beta(k, m)) * std::pow(logn, params.gamma_of(m)));
  }
  return e;
}

Dominance dominance(const TrajectoryParams& params, double p) {
  const Envelopes e = envelopes(params, p);
  return {e.q_traj / (e.q_upper - e.q_traj), e.q_traj / (e.q_traj - e.q_lower)};
}

UsableWindow usable_window(const TrajectoryParams& params, std::size_t grid_points) {
  params.validate();
  if (grid_points < 2) throw std::invalid_argument("usable_window needs at least 2 grid points");
  UsableWindow w;
  bool upper_ok = true;
  bool lower_ok = true;
  for (std::size_t j = 0; j < grid_points && (upper_ok || lower_ok); ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(grid_points - 1);
    const double p = 1.0 - t * (1.0 - params.p_floor);
    const Dominance d = dominance(params, p);
    upper_ok = upper_ok && d.upper > 1.0;
    lower_ok = lower_ok && d.lower > 1.0;
    if (upper_ok) w.upper_from = p;
    if (lower_ok) w.lower_from = p;
  }
  return w;
}

CriticalIntervals critical_intervals(const TrajectoryParams& params, double p) {
  params.validate();
  require_density(p);
  const int k = params.k;
  const double n = params.n;
  const double logn = std::log(n);
  const double s = sigma(p, k);
  const double q = q_traj(p, n, k);
  const double upper_unit = monomial(1.0, n, k - 1, p, pairs(k) - 4);
  const double lower_unit = std::pow(n, alpha(k)) / p * std::pow(logn, params.mu);
  CriticalIntervals ci;
  ci.q_upper = {q + b_constant(k) * upper_unit, q + 0.5 * upper_unit};
  ci.q_lower = {q - s * s * lower_unit, q - s * (s - 1) * lower_unit};
  for (int m = 2; m <= k - 1; ++m) {
    const double r = r_traj(p, n, k, m);
    const double unit = std::pow(n, beta(k, m)) * std::pow(logn, params.gamma_of(m));
    ci.r_upper.push_back({r + (s - 1) * unit, r + s * unit});
  }
  return ci;
}

Residuals residuals(const TrajectoryParams& params, double p, double q_observed,
                    const std::vector<double>& r_observed) {
  params.validate();
  require_density(p);
  const int k = params.k;
  const double n = params.n;
  const double logn = std::log(n);
  const double s = sigma(p, k);
  const double q = q_traj(p, n, k);
  Residuals out;
  out.u = q_observed - q - monomial(0.5, n, k - 1, p, pairs(k) - 4);
  out.l = q_observed - q + s * s * std::pow(n, alpha(k)) / p * std::pow(logn, params.mu);
  for (std::size_t j = 0; j < r_observed.size() && static_cast<int>(j) + 2 <= k - 1; ++j) {
    const int m = static_cast<int>(j) + 2;
    out.z.push_back(r_observed[j] - r_traj(p, n, k, m) -
                    (s - 1) * std::pow(n, beta(k, m)) * std::pow(logn, params.gamma_of(m)));
  }
  return out;
}

double final_size_exponent(int k) {
  if (k < 3) throw std::invalid_argument("k must be at least 3");
  return 2.0 - 1.0 / (k * (k - 1.0) - 2.0);
}

double final_size_bound(const TrajectoryParams& params) {
  params.validate();
  return std::cbrt(2.0) / 2.0 * std::pow(params.n, final_size_exponent(params.k)) *
         std::pow(std::log(params.n), params.lambda);
}

double barrier_p(int k, double n) {
  if (k < 3) throw std::invalid_argument("k must be at least 3");
  return std::pow(n, -1.0 / (k * (k - 1.0) - 2.0));
}

void write_curves_csv(std::ostream& os, const TrajectoryParams& params, std::size_t points) {
  params.validate();
  if (points < 2) throw std::invalid_argument("curves need at least 2 grid points");
  const int k = params.k;
  os << "p,sigma,q_traj,q_upper,q_lower";
  for (int m = 2; m <= k - 1; ++m) os << fmt::format(",r_traj_m{0},band_m{0}", m);
  os << '\n';
  for (std::size_t j = 0; j < points; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(points - 1);
    const double p = params.p_floor + t * (1.0 - params.p_floor);
    const Envelopes e = envelopes(params, p);
    os << fmt::format("{},{},{},{},{}", p, sigma(p, k), e.q_traj, e.q_upper, e.q_lower);
    for (std::size_t mi = 0; mi < e.r_traj.size(); ++mi) os << fmt::format(",{},{}", e.r_traj[mi], e.r_band[mi]);
    os << '\n';
  }
}

}  // namespace krsim
