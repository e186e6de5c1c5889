#pragma once
// Closed-form tail bounds for martingales and binomials, and the union bound
// over all m-sets that says every extension count stays in its band at p0.

#include <span>
#include <vector>

#include "krsim/trajectory.hpp"

namespace krsim {

// Azuma-Hoeffding: exp(-a^2 / (2 sum c_i^2)). a > 0, every c_i > 0.
double azuma_bound(double a, std::span<const double> c);

// (eta, N)-bounded supermartingale over ell steps: exp(-a^2 / (3 ell eta N)).
// Requires eta <= N/10 and 0 < a < eta * ell.
double bohman_bound(double a, double ell, double eta, double big_n);

// Binomial(n, p) two-sided: 2 exp(-xi^2 / (3 n p)) for 0 < xi <= n p.
double chernoff_bound(double n, double p, double xi);

struct UnionTerm {
  int m = 0;
  double xi = 0;
  double log_term = 0;      // log of C(n,m) * 2 exp(...)
  double term = 0;          // may underflow to 0
  double theta_exponent = 0;  // exponent of n inside the exp, as displayed: beta_m
  double derived_exponent = 0;  // 2 beta_m - (k-m) + (C(k,2)-C(m,2))/(k(k-1)-2)
};

struct UnionBound {
  double constant_c = 1.0;
  double p0 = 0;
  double p_used = 0;    // min(p0, 1): sigma and the density power need a real density
  bool horizon_vacuous = false;
  std::vector<UnionTerm> terms;  // m = 2..k-1
  double log_total = 0;
  double total = 0;
  bool increasing_in_m = false;
};

// sum_{m=2}^{k-1} C(n,m) 2 exp(-c (k-m)! xi_m^2 / (3 n^{k-m} p^{C(k,2)-C(m,2)}))
// with xi_m = sigma n^{beta_m} log^{gamma_m} n, evaluated at p0.
UnionBound extension_union_bound(const TrajectoryParams& params, double constant_c = 1.0);

}  // namespace krsim
