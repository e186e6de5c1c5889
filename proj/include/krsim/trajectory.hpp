#pragma once
// Deterministic trajectories, error envelopes and critical intervals that the
// K_k-removal process is predicted to follow. Natural logs throughout; real
// arithmetic is double, with monomials in n evaluated in log space.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "krsim/exact.hpp"

namespace krsim {

struct TrajectoryParams {
  int k = 4;
  double n = 0;
  double lambda = 1.0;
  double mu = 2.0;
  std::map<int, double> gamma;  // m -> gamma_m; missing entries read as 1
  double p_floor = 0.3;

  static TrajectoryParams defaults(int k, double n);
  double gamma_of(int m) const;
  // Enforces k >= 4, n >= k, (C(k,2)+1)λ > μ+2, (C(k,2)-C(m,2))λ > γ_m+1, γ_2 > 1/2.
  void validate() const;
};

// Edge density after i steps. Throws for i < 0 or p < 0.
double p_of(double i, std::size_t n, int k);
// (n^2 p - n) / 2, which is C(n,2) - C(k,2) i.
double edges_expected(double i, std::size_t n, int k);

double q_traj(double p, double n, int k);
double r_traj(double p, double n, int k, int m);

double sigma(double p, int k);
double sigma_prime(double p, int k);

// k >= 4 only (the range the tracking envelopes cover).
double alpha(int k);
double beta(int k, int m);
double b_constant(int k);
Rational alpha_exact(int k);
Rational beta_exact(int k, int m);
Rational b_constant_exact(int k);

struct Horizon {
  double i0 = 0;
  double p0 = 0;
  // p0 >= 1 or i0 <= 0: the guarantee says nothing at this n.
  bool vacuous = false;
};
Horizon i0_p0(const TrajectoryParams& params);

// Smallest n above which p0 < 1, i.e. n^{1/(k(k-1)-2)} > 2^{1/3} log^λ n.
// Returns ln n at the crossing; 0 when p0 < 1 for every n >= 2.
double p0_threshold_log_n(int k, double lambda);

struct Envelopes {
  double q_traj = 0;
  double q_upper = 0;
  double q_lower = 0;
  std::vector<double> r_traj;     // entry m-2
  std::vector<double> r_band;     // half-width σ n^{β_m} log^{γ_m} n, entry m-2
};
Envelopes envelopes(const TrajectoryParams& params, double p);

// Main term over error term for the two Q_k envelopes at density p.
struct Dominance {
  double upper = 0;  // q_traj / ((n^{k-1}/2) p^{C(k,2)-4})
  double lower = 0;  // q_traj / (σ^2 n^α p^{-1} log^μ n)
};
Dominance dominance(const TrajectoryParams& params, double p);

// Smallest density on a uniform grid of [p_floor, 1] from which the ratio stays
// above 1 all the way up to p = 1. nullopt when it fails already at p = 1.
struct UsableWindow {
  std::optional<double> upper_from;
  std::optional<double> lower_from;
};
UsableWindow usable_window(const TrajectoryParams& params, std::size_t grid_points = 701);

struct Interval {
  double lo = 0;
  double hi = 0;
  double width() const { return hi - lo; }
};
struct CriticalIntervals {
  Interval q_upper;
  Interval q_lower;
  std::vector<Interval> r_upper;  // entry m-2
};
CriticalIntervals critical_intervals(const TrajectoryParams& params, double p);

struct Residuals {
  double u = 0;
  double l = 0;
  std::vector<double> z;  // entry m-2
};
// r_observed is indexed m-2 and may be shorter than k-2 (missing entries skipped).
Residuals residuals(const TrajectoryParams& params, double p, double q_observed,
                    const std::vector<double>& r_observed);

// Edge count at i0: (2^{1/3}/2) n^{2-1/(k(k-1)-2)} log^λ n.
double final_size_bound(const TrajectoryParams& params);
double final_size_exponent(int k);
// n^{-1/(k(k-1)-2)}, log factors dropped.
double barrier_p(int k, double n);

// CSV on a uniform p-grid over [p_floor, 1].
void write_curves_csv(std::ostream& os, const TrajectoryParams& params, std::size_t points);

}  // namespace krsim
