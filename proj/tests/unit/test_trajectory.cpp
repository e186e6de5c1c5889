#include <doctest.h>

#include <cmath>
#include <sstream>

#include "krsim/common.hpp"
#include "krsim/trajectory.hpp"

using namespace krsim;

TEST_CASE("edge density and expected edges") {
  CHECK(p_of(0, 100, 4) == 1.0);
  CHECK(p_of(100, 100, 4) == doctest::Approx(0.88).epsilon(1e-15));
  CHECK(p_of(10000.0 / 12.0, 100, 4) == doctest::Approx(0.0));
  CHECK_THROWS_AS(p_of(900, 100, 4), std::invalid_argument);
  CHECK(edges_expected(100, 100, 4) == doctest::Approx(4350).epsilon(1e-14));
  CHECK(edges_expected(0, 100, 4) == doctest::Approx(4950).epsilon(1e-14));
  CHECK(edges_expected(1, 6, 4) == doctest::Approx(9).epsilon(1e-14));
  for (std::size_t n : {10u, 57u, 300u}) {
    for (double i : {0.0, 1.0, 5.0, 8.0}) {
      CHECK(edges_expected(i, n, 4) == doctest::Approx(binomial_real(n, 2) - 6 * i).epsilon(1e-12));
    }
  }
}

TEST_CASE("trajectories") {
  CHECK(q_traj(1, 6, 4) == doctest::Approx(54).epsilon(1e-14));
  CHECK(r_traj(1, 100, 4, 2) == doctest::Approx(5000).epsilon(1e-14));
  CHECK(q_traj(0.5, 200, 4) / q_traj(1, 200, 4) == doctest::Approx(1.0 / 64).epsilon(1e-14));
  // overflow-safe path agrees with the direct product where both work
  CHECK(q_traj(0.3, 1e40, 8) == doctest::Approx(std::exp(8 * std::log(1e40) - std::lgamma(9.0) + 28 * std::log(0.3))).epsilon(1e-12));
  CHECK(std::isfinite(q_traj(0.3, 1e40, 8)));
  CHECK_THROWS_AS(r_traj(1, 100, 4, 4), std::invalid_argument);
}

TEST_CASE("sigma") {
  CHECK(sigma(1, 4) == 1.0);
  CHECK(sigma(0.5, 4) == doctest::Approx(1 + 3 * std::log(2.0)).epsilon(1e-15));
  CHECK(sigma(0.2, 4) > sigma(0.5, 4));
  CHECK(sigma(1e-300, 4) > 2000);
  CHECK(sigma_prime(0.5, 4) == doctest::Approx(72));
  CHECK_THROWS_AS(sigma(0, 4), std::invalid_argument);
}

TEST_CASE("exponents and the constant B, exactly") {
  CHECK(alpha_exact(4) == Rational(33, 10));
  CHECK(beta_exact(4, 2) == Rational(3, 2));
  CHECK(beta_exact(4, 3) == Rational(7, 10));
  CHECK(b_constant_exact(4) == Rational(17, 36));
  for (int k = 4; k <= 10; ++k) CHECK(b_constant_exact(k) < Rational(1, 2));
  // beta_2 = k - 5/2 for every k
  for (int k = 4; k <= 10; ++k) CHECK(beta_exact(k, 2) == Rational(2 * k - 5, 2));
  CHECK_THROWS_AS(alpha(3), std::invalid_argument);
  CHECK_THROWS_AS(b_constant(3), std::invalid_argument);
}

TEST_CASE("parameter constraints") {
  TrajectoryParams p = TrajectoryParams::defaults(4, 500);
  CHECK_NOTHROW(p.validate());
  p.mu = 5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = TrajectoryParams::defaults(4, 500);
  p.gamma[2] = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = TrajectoryParams::defaults(4, 500);
  p.gamma[3] = 2;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_THROWS_AS(TrajectoryParams::defaults(3, 500).validate(), std::invalid_argument);
}

TEST_CASE("horizon i0 and p0") {
  TrajectoryParams p = TrajectoryParams::defaults(4, 1e4);
  const Horizon h = i0_p0(p);
  CHECK(h.i0 < 0);
  CHECK(h.vacuous);
  const double x = p0_threshold_log_n(4, 1.0);
  CHECK(x == doctest::Approx(38.9).epsilon(0.01));
  // just above the threshold p0 < 1 and p_of(i0) = p0
  p.n = std::exp(x + 0.5);
  const Horizon above = i0_p0(p);
  CHECK_FALSE(above.vacuous);
  CHECK(above.p0 < 1);
  const double nn = p.n;
  CHECK(1 - 12 * above.i0 / (nn * nn) == doctest::Approx(above.p0).epsilon(1e-9));
  p.n = std::exp(x - 0.5);
  CHECK(i0_p0(p).p0 > 1);
}

TEST_CASE("envelopes") {
  const TrajectoryParams p = TrajectoryParams::defaults(4, 500);
  const Envelopes e1 = envelopes(p, 1.0);
  CHECK(e1.q_upper - e1.q_traj == doctest::Approx(std::pow(500.0, 3) / 2).epsilon(1e-12));
  CHECK(e1.q_traj - e1.q_lower == doctest::Approx(std::pow(500.0, 3.3) * std::pow(std::log(500.0), 2)).epsilon(1e-12));
  for (double q : {0.3, 0.5, 0.8, 1.0}) {
    const Envelopes e = envelopes(p, q);
    CHECK(e.q_lower < e.q_traj);
    CHECK(e.q_traj < e.q_upper);
    CHECK(e.r_band.size() == 2);
  }
  CHECK_THROWS_AS(envelopes(p, 0.0), std::invalid_argument);
}

TEST_CASE("envelope bands are monotone in p on a grid") {
  const TrajectoryParams p = TrajectoryParams::defaults(4, 500);
  Envelopes prev = envelopes(p, 0.3);
  for (int j = 1; j <= 70; ++j) {
    const Envelopes e = envelopes(p, 0.3 + 0.01 * j);
    CHECK(e.q_traj > prev.q_traj);
    CHECK(e.q_upper - e.q_traj > prev.q_upper - prev.q_traj);
    CHECK(e.r_band[0] < prev.r_band[0]);  // sigma shrinks as p grows
    prev = e;
  }
}

TEST_CASE("dominance at n = 500 and the usable window") {
  const TrajectoryParams p = TrajectoryParams::defaults(4, 500);
  const Dominance d = dominance(p, 0.5);
  CHECK(d.upper == doctest::Approx(2.6).epsilon(0.05));
  CHECK(d.lower < 1);  // the lower envelope is wider than the trajectory here
  const UsableWindow w = usable_window(p);
  REQUIRE(w.upper_from);
  CHECK(*w.upper_from > 0.3);
  CHECK(*w.upper_from < 0.5);
  CHECK_FALSE(w.lower_from);
}

TEST_CASE("lower-envelope dominance holds at the p0 threshold") {
  TrajectoryParams p = TrajectoryParams::defaults(4, std::exp(p0_threshold_log_n(4, 1.0) + 1e-6));
  const Horizon h = i0_p0(p);
  const double nn = p.n;
  const double ln = std::log(nn);
  const double main = q_traj(h.p0, nn, 4);
  const double err = std::pow(sigma(h.p0, 4), 2) * std::pow(nn, alpha(4)) / h.p0 * ln * ln;
  CHECK(main / err > 1);
}

TEST_CASE("critical intervals") {
  const TrajectoryParams p = TrajectoryParams::defaults(4, 500);
  for (double q : {0.35, 0.6, 1.0}) {
    const CriticalIntervals ci = critical_intervals(p, q);
    CHECK(ci.q_upper.lo < ci.q_upper.hi);
    CHECK(ci.q_lower.lo < ci.q_lower.hi);
    const double unit = std::pow(500.0, 1.5) * std::log(500.0);
    CHECK(ci.r_upper[0].width() == doctest::Approx(unit).epsilon(1e-12));
  }
}

TEST_CASE("residuals") {
  const TrajectoryParams p = TrajectoryParams::defaults(4, 50);
  const Envelopes e = envelopes(p, 0.7);
  CHECK(residuals(p, 0.7, e.q_upper, {}).u == doctest::Approx(0).scale(e.q_upper));
  // at i = 0 with exact counts the upper residual is negative
  for (double n : {4.0, 6.0, 10.0, 50.0, 300.0}) {
    TrajectoryParams q = TrajectoryParams::defaults(4, n);
    const double exact = binomial_real(n, 4);
    CHECK(residuals(q, 1.0, exact, {}).u < 0);
    const Residuals r = residuals(q, 1.0, exact, {binomial_real(n - 2, 2), n - 3});
    CHECK(r.z[0] < 0);
    CHECK(r.z[1] < 0);
  }
}

TEST_CASE("final size and barrier") {
  CHECK(final_size_exponent(4) == doctest::Approx(1.9));
  CHECK(final_size_exponent(5) == doctest::Approx(2 - 1.0 / 18));
  CHECK(barrier_p(4, 1e10) == doctest::Approx(0.1));
  // the bound and the expected edge count at i0 differ by a factor 1 + O(1/(n p0))
  for (double n : {1e18, 1e20, 1e40}) {
    const TrajectoryParams p = TrajectoryParams::defaults(4, n);
    const Horizon h = i0_p0(p);
    REQUIRE_FALSE(h.vacuous);
    const double edges = (n * n * h.p0 - n) / 2;
    CHECK(std::abs(final_size_bound(p) / edges - 1) <= 2 / (n * h.p0) + 1e-13);
  }
}

TEST_CASE("curves CSV") {
  std::stringstream ss;
  write_curves_csv(ss, TrajectoryParams::defaults(4, 200), 11);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "p,sigma,q_traj,q_upper,q_lower,r_traj_m2,band_m2,r_traj_m3,band_m3");
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  CHECK(rows == 11);
}
