#include "krsim/tail_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "krsim/common.hpp"

namespace krsim {

double azuma_bound(double a, std::span<const double> c) {
  if (!(a > 0)) throw std::invalid_argument("azuma: a must be positive");
  if (c.empty()) throw std::invalid_argument("azuma: need at least one increment bound");
  double sum = 0;
  for (double ci : c) {
    if (!(ci > 0)) throw std::invalid_argument("azuma: every c_i must be positive");
    sum += ci * ci;
  }
  return std::exp(-a * a / (2 * sum));
}

double bohman_bound(double a, double ell, double eta, double big_n) {
  if (!(ell > 0) || !(eta > 0) || !(big_n > 0)) throw std::invalid_argument("bohman: ell, eta, N must be positive");
  if (eta > big_n / 10) throw std::invalid_argument("bohman: needs eta <= N/10");
  if (!(a > 0) || !(a < eta * ell)) throw std::invalid_argument("bohman: needs 0 < a < eta * ell");
  return std::exp(-a * a / (3 * ell * eta * big_n));
}

double chernoff_bound(double n, double p, double xi) {
  if (!(n > 0) || !(p > 0 && p <= 1)) throw std::invalid_argument("chernoff: needs n > 0 and p in (0, 1]");
  if (!(xi > 0) || xi > n * p) throw std::invalid_argument("chernoff: needs 0 < xi <= n p");
  return 2 * std::exp(-xi * xi / (3 * n * p));
}

UnionBound extension_union_bound(const TrajectoryParams& params, double constant_c) {
  params.validate();
  if (!(constant_c > 0)) throw std::invalid_argument("union bound: constant_c must be positive");
  const int k = params.k;
  const double n = params.n;
  const double logn = std::log(n);
  const Horizon h = i0_p0(params);
  UnionBound out;
  out.constant_c = constant_c;
  out.p0 = h.p0;
  out.p_used = std::min(h.p0, 1.0);
  out.horizon_vacuous = h.vacuous;
  const double s = sigma(out.p_used, k);
  const double pairs_k = k * (k - 1) / 2.0;
  const double d = k * (k - 1.0) - 2.0;
  for (int m = 2; m <= k - 1; ++m) {
    UnionTerm t;
    t.m = m;
    const double b = beta(k, m);
    const double pairs_diff = pairs_k - m * (m - 1) / 2.0;
    t.xi = s * std::pow(n, b) * std::pow(logn, params.gamma_of(m));
    const double log_arg = std::log(constant_c) + std::lgamma(k - m + 1.0) + 2 * std::log(t.xi) - std::log(3.0) -
                           (k - m) * logn - pairs_diff * std::log(out.p_used);
    const double log_choose = std::lgamma(n + 1) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1);
    t.log_term = log_choose + std::log(2.0) - std::exp(log_arg);
    t.term = std::exp(t.log_term);
    t.theta_exponent = b;
    t.derived_exponent = 2 * b - (k - m) + pairs_diff / d;
    out.terms.push_back(t);
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& t : out.terms) peak = std::max(peak, t.log_term);
  double scaled = 0;
  for (const auto& t : out.terms) scaled += std::exp(t.log_term - peak);
  out.log_total = peak + std::log(scaled);
  out.total = std::exp(out.log_total);
  out.increasing_in_m = true;
  for (std::size_t j = 1; j < out.terms.size(); ++j) {
    out.increasing_in_m = out.increasing_in_m && out.terms[j].log_term > out.terms[j - 1].log_term;
  }
  return out;
}

}  // namespace krsim
