#include <doctest.h>

#include <cmath>
#include <vector>

#include "rotbec/asymptotics.hpp"
#include "rotbec/trial.hpp"

using namespace rotbec;

TEST_CASE("regime classification") {
  CHECK(classify_regime(0.1, 0.0) == Regime::Sub);
  CHECK(classify_regime(0.05, 1.0) == Regime::Sub);
  CHECK(classify_regime(0.1, 4.0 / 0.1) == Regime::Linear);
  CHECK(classify_regime(0.02, 4.0 / 0.02) == Regime::Linear);
  // omega = eps^-1.5: omega0 = eps^-0.5 clears the default band once eps is
  // small enough.
  CHECK(classify_regime(1e-4, std::pow(1e-4, -1.5)) == Regime::Super);
  CHECK_THROWS_AS(classify_regime(1.5, 1.0), std::invalid_argument);

  SUBCASE("alpha recovered from two samples") {
    const double a = estimate_alpha(0.1, std::pow(0.1, -1.5), 0.05,
                                    std::pow(0.05, -1.5));
    CHECK(a == doctest::Approx(0.5).epsilon(1e-10));
  }

  SUBCASE("scale consistency of the linear band") {
    for (double eps : {0.5, 0.1, 0.02, 0.003})
      CHECK(classify_regime(eps, 4.0 / eps) == Regime::Linear);
  }
}

TEST_CASE("rate fitting on synthetic laws") {
  SUBCASE("power-log model") {
    std::vector<std::pair<double, double>> s;
    for (double eps : {0.1, 0.07, 0.05, 0.035, 0.02})
      s.push_back({eps, 2.0 * eps * std::abs(std::log(eps))});
    const RateFit fit = fit_rate(s, RateModel::PowerLog);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.01));
    CHECK(fit.stderr_exponent < 0.01);
  }

  SUBCASE("pure power model") {
    std::vector<std::pair<double, double>> s;
    for (double eps : {0.1, 0.07, 0.05, 0.035, 0.02})
      s.push_back({eps, std::pow(eps, 2.0 / 3.0)});
    const RateFit fit = fit_rate(s, RateModel::PurePower);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.exponent == doctest::Approx(2.0 / 3.0).epsilon(0.01));
  }

  SUBCASE("five samples per decade recover exponents to 1%") {
    std::vector<std::pair<double, double>> s;
    for (int k = 0; k < 10; ++k) {
      const double eps = std::pow(10.0, -1.0 - 2.0 * k / 9.0);
      s.push_back({eps, 3.7 * std::pow(eps, 1.37)});
    }
    const RateFit fit = fit_rate(s, RateModel::PurePower);
    CHECK(std::abs(fit.exponent - 1.37) < 0.01 * 1.37);
  }

  SUBCASE("constant gaps are flagged degenerate") {
    std::vector<std::pair<double, double>> s = {
        {0.1, 0.5}, {0.05, 0.5}, {0.02, 0.5}};
    const RateFit fit = fit_rate(s, RateModel::PurePower);
    CHECK(fit.degenerate);
  }

  SUBCASE("reversals are flagged degenerate") {
    std::vector<std::pair<double, double>> s = {
        {0.1, 0.5}, {0.05, 0.8}, {0.02, 0.3}};
    const RateFit fit = fit_rate(s, RateModel::PurePower);
    CHECK(fit.degenerate);
  }

  SUBCASE("input validation") {
    std::vector<std::pair<double, double>> two = {{0.1, 1.0}, {0.05, 0.5}};
    CHECK_THROWS_AS(fit_rate(two, RateModel::PurePower),
                    std::invalid_argument);
    std::vector<std::pair<double, double>> neg = {
        {0.1, 1.0}, {0.05, -0.5}, {0.02, 0.2}};
    CHECK_THROWS_AS(fit_rate(neg, RateModel::PurePower),
                    std::invalid_argument);
  }
}

TEST_CASE("TF energy decay exponent toward the fast-rotation limit") {
  for (double s : {3.0, 4.0, 6.0}) {
    const double wc = tf::critical_velocity(s).omega_c;
    std::vector<double> omegas;
    for (int k = 0; k < 10; ++k)
      omegas.push_back(5.0 * wc * std::pow(10.0, k / 9.0));
    const TfRateCheck chk = tf_rate_check(s, omegas);
    CHECK(chk.target_exponent ==
          doctest::Approx(-4.0 * (s + 2.0) / (3.0 * (s - 2.0)))
              .epsilon(1e-14));
    CHECK(std::abs(chk.fitted_exponent - chk.target_exponent) <
          0.1 * std::abs(chk.target_exponent));
  }
  CHECK_THROWS_AS(tf_rate_check(4.0, {0.1, 0.2, 0.3}), std::invalid_argument);
}

TEST_CASE("concentration of the scaled TF density") {
  const double s = 4.0;

  SUBCASE("second moment tracks delta^2/5 at large omega0") {
    // The leading profile is the parabola (delta^2 - u^2) around x = 1, so
    // Int u^2 rho / Int rho = delta^2 / 5.
    for (double w : {100.0, 300.0}) {
      const tf::ScaledSolution sc = tf::scaled_solve(s, w);
      const double delta = tf::hole_width_delta(s, w);
      const Concentration c = tf_concentration(sc, 10.0);  // full support
      CHECK(c.second_moment / (delta * delta) ==
            doctest::Approx(0.2).epsilon(0.02));
      CHECK(c.mass_in_shell == doctest::Approx(1.0).epsilon(1e-8));
    }
  }

  SUBCASE("second moment decreases along increasing omega0") {
    double prev = 1e300;
    for (double w : {20.0, 60.0, 180.0}) {
      const Concentration c =
          tf_concentration(tf::scaled_solve(s, w), 1e-3);
      CHECK(c.second_moment < prev);
      prev = c.second_moment;
    }
  }

  SUBCASE("grid-state concentration agrees with the radial quadrature") {
    const double w = 40.0;
    const tf::ScaledSolution sc = tf::scaled_solve(s, w);
    // Sample sqrt(rho_tilde) on a grid in x units (r_m = 1 state).
    const Grid grid = make_grid(256, 1.6);
    GpState st = make_state(grid, 0.05, 0.0);
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix) {
        const double x = std::hypot(grid.coord(ix), grid.coord(iy));
        st.field[grid.index(ix, iy)] = std::sqrt(sc.density(x));
      }
    st.normalize();
    const double halfwidth = 3.0 * tf::hole_width_delta(s, w);
    const Concentration a = delta_concentration_check(st, 1.0, halfwidth);
    const Concentration b = tf_concentration(sc, halfwidth);
    CHECK(a.second_moment == doctest::Approx(b.second_moment).epsilon(0.05));
    CHECK(a.mass_in_shell == doctest::Approx(b.mass_in_shell).epsilon(0.05));
  }
}

TEST_CASE("grid policy scales resolution with epsilon") {
  GridPolicy policy;
  const Grid g1 = grid_for(policy, 0.1, 1.668);
  const Grid g2 = grid_for(policy, 0.02, 1.668);
  CHECK(g1.n < g2.n);
  CHECK(g2.n <= policy.max_n);
  CHECK(g1.n >= policy.min_n);
  CHECK(g1.box_radius == doctest::Approx(2.0 * 1.668));
  // Spacing within the policy band unless clamped.
  if (g2.n < policy.max_n)
    CHECK(g2.spacing() <=
          policy.spacing_factor * std::pow(0.02, 2.0 / 3.0) * 1.0001);
}

TEST_CASE("sub-regime sweep approaches the non-rotating TF energy") {
  RegimeSpec spec;
  spec.kind = Regime::Sub;
  spec.s = 4.0;
  spec.omega0 = 0.0;  // fixed omega = 0
  spec.epsilon_list = {0.1, 0.07, 0.05};
  SweepOptions opt;
  opt.grid.max_n = 160;
  opt.minimize.max_iterations = 6000;
  opt.minimize.energy_rtol = 1e-10;
  const SweepReport rep = run_sweep(spec, opt);
  REQUIRE(rep.rows.size() == 3);
  const double e_star = tf::solve(4.0, 0.0).energy;
  double prev_gap = 1e300;
  for (const auto& row : rep.rows) {
    CHECK(row.valid);
    CHECK(row.e_tf == doctest::Approx(e_star).epsilon(1e-10));
    CHECK(row.gap > 0.0);
    CHECK(row.gap < prev_gap);
    // gap / eps^(2/3) bounded along the sequence
    CHECK(row.gap / std::pow(row.epsilon, 2.0 / 3.0) < 1.0);
    prev_gap = row.gap;
  }
  CHECK(rep.model == "power");
  CHECK(rep.target_exponent == doctest::Approx(2.0 / 3.0));
}
