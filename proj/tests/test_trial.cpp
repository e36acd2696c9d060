#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rotbec/gp.hpp"
#include "rotbec/quadrature.hpp"
#include "rotbec/tf.hpp"
#include "rotbec/trial.hpp"

using namespace rotbec;
constexpr double kPi = std::numbers::pi;

TEST_CASE("regularized TF density") {
  const tf::Solution sol = tf::solve(4.0, 4.0);
  const double eps = 0.05;
  const RegularizedDensity rho(sol, eps);

  SUBCASE("unit mass") {
    CHECK(std::abs(rho.mass() - 1.0) < 1e-8);
  }

  SUBCASE("uniform bound: regularization cannot exceed the TF peak") {
    const double tf_peak =
        sol.density(tf::density_peak_radius(sol.s, sol.omega0));
    CHECK(rho.max_value() <= tf_peak + 1e-6);
    CHECK(rho.max_value() > 0.5 * tf_peak);
  }

  SUBCASE("exponential tail bound outside the support") {
    const double bound =
        std::exp(-10.0) / (2.0 * kPi * eps * eps);
    CHECK(rho.evaluate_exact(sol.r_out + 10.0 * eps) <= bound);
    CHECK(rho.evaluate_exact(sol.r_out + 10.0 * eps) > 0.0);
  }

  SUBCASE("table interpolation tracks the exact evaluator") {
    for (double r : {0.0, 0.9, 1.2, 1.4, 1.7, 2.0})
      CHECK(rho(r) ==
            doctest::Approx(rho.evaluate_exact(r)).epsilon(1e-5));
  }

  SUBCASE("radial kinetic budget of sqrt(rho_eps) scales like 1/eps") {
    // || grad sqrt(rho_eps) ||^2 * eps stays bounded along the sequence.
    double prev = 0.0;
    for (double e : {0.1, 0.05}) {
      const RegularizedDensity re(sol, e);
      const double dr = e / 40.0;
      double acc = 0.0;
      for (double r = dr; r < re.r_max(); r += dr) {
        const double d =
            (std::sqrt(re(r + 0.5 * dr)) - std::sqrt(re(r - 0.5 * dr))) / dr;
        acc += 2.0 * kPi * r * d * d * dr;
      }
      const double budget = acc * e;
      CHECK(budget < 30.0);
      if (prev > 0.0) CHECK(budget < 3.0 * prev);
      prev = budget;
    }
  }
}

TEST_CASE("vortex lattice construction") {
  const tf::Solution sol = tf::solve(4.0, 4.0);

  SUBCASE("default spacing and vortex density match the rotation") {
    for (double eps : {0.1, 0.05, 0.02}) {
      const VortexLattice lat =
          build_vortex_lattice(4.0, eps, sol.r_out);
      CHECK(lat.spacing ==
            doctest::Approx(std::sqrt(2.0 * kPi * eps / 4.0)).epsilon(1e-13));
      // Count / clipped area approaches 1/spacing^2 = omega/(2 pi).
      const double area = kPi * lat.clip_radius * lat.clip_radius;
      const double per_area = double(lat.count()) / area;
      CHECK(per_area ==
            doctest::Approx(1.0 / (lat.spacing * lat.spacing)).epsilon(0.08));
    }
  }

  SUBCASE("N_eps * eps stays bounded") {
    double lo = 1e300, hi = 0.0;
    for (double eps : {0.1, 0.05, 0.02}) {
      const VortexLattice lat = build_vortex_lattice(4.0, eps, sol.r_out);
      const double v = double(lat.count()) * eps;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi / lo < 2.0);
  }

  SUBCASE("minimum pairwise distance equals the spacing") {
    const VortexLattice lat = build_vortex_lattice(4.0, 0.1, sol.r_out);
    double dmin = 1e300;
    for (std::size_t i = 0; i < lat.count(); ++i)
      for (std::size_t j = i + 1; j < lat.count(); ++j)
        dmin = std::min(dmin, std::hypot(lat.sites[i][0] - lat.sites[j][0],
                                         lat.sites[i][1] - lat.sites[j][1]));
    CHECK(dmin == doctest::Approx(lat.spacing).epsilon(1e-12));
  }

  SUBCASE("single-site lattice when only the origin fits") {
    // Spacing just over clip/1: pick delta so l < r_out but 2r_out - 2sqrt2 l < l.
    const double r_out = 1.0;
    const double delta = 1.2, eps = 0.25;  // l = 0.6, clip = 0.303
    const VortexLattice lat = build_vortex_lattice(4.0, eps, r_out, delta);
    CHECK(lat.count() == 1);
    CHECK(lat.sites[0][0] == 0.0);
    CHECK(lat.sites[0][1] == 0.0);
  }

  SUBCASE("rejects spacing beyond the TF radius") {
    CHECK_THROWS_AS(build_vortex_lattice(4.0, 0.5, 0.4, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("phase factor and cutoff") {
  const VortexLattice lat = build_vortex_lattice(4.0, 0.1, 1.668);

  SUBCASE("unit modulus everywhere off the sites") {
    for (double x : {-1.1, 0.3, 0.77})
      for (double y : {-0.9, 0.1, 1.3}) {
        const auto [g, chi] = phase_and_cutoff(lat, x, y);
        CHECK(std::abs(std::abs(g) - 1.0) < 1e-12);
        CHECK(chi >= 0.0);
        CHECK(chi <= 1.0);
      }
  }

  SUBCASE("convention at an exact site") {
    const auto [g, chi] = phase_and_cutoff(lat, 0.0, 0.0);
    CHECK(g == std::complex<double>(1.0, 0.0));
    CHECK(chi == 0.0);
  }

  SUBCASE("cutoff is 1 away from all sites") {
    const auto [g, chi] =
        phase_and_cutoff(lat, 0.5 * lat.spacing, 0.5 * lat.spacing);
    CHECK(chi == 1.0);
  }

  SUBCASE("winding number 1 around a single site") {
    CHECK(phase_winding(lat, 0.0, 0.0, 0.3 * lat.spacing) == 1);
    CHECK(phase_winding(lat, lat.spacing, 0.0, 0.3 * lat.spacing) == 1);
  }

  SUBCASE("winding equals the number of enclosed sites") {
    // Radius 1.2 spacings encloses the origin and its 4 nearest neighbours;
    // 1.45 spacings picks up the diagonal sites as well.
    CHECK(phase_winding(lat, 0.0, 0.0, 1.2 * lat.spacing) == 5);
    CHECK(phase_winding(lat, 0.0, 0.0, 1.45 * lat.spacing) == 9);
    // A circle of radius 2 r_out encloses every site.
    CHECK(phase_winding(lat, 0.0, 0.0, 2.0 * 1.668) == int(lat.count()));
  }
}

TEST_CASE("assembled trial state") {
  const double s = 4.0, omega0 = 4.0;
  const tf::Solution sol = tf::solve(s, omega0);
  const TrapPotential V = TrapPotential::homogeneous(s);

  SUBCASE("normalization constant stays in the certified band") {
    const Grid grid = make_grid(160, 2.0 * sol.r_out);
    const TrialState trial = assemble_trial(sol, 0.05, omega0, grid);
    CHECK(trial.c_eps_sq >= 1.0 - 1e-8);
    CHECK(trial.c_eps_sq <= 1.001);
    CHECK(std::abs(trial.state.norm() - 1.0) < 1e-10);
  }

  SUBCASE("no rotation: the trial is real") {
    const Grid grid = make_grid(96, 2.0 * tf::solve(s, 0.0).r_out);
    const TrialState trial = assemble_trial(tf::solve(s, 0.0), 0.1, 0.0, grid);
    CHECK(trial.lattice.count() == 0);
    for (const auto& v : trial.state.field) CHECK(v.imag() == 0.0);
  }

  SUBCASE("upper-bound gap shrinks along the epsilon sequence") {
    double prev_gap = 1e300;
    for (double eps : {0.1, 0.05, 0.02}) {
      const Grid grid = make_grid(eps > 0.03 ? 160 : 256, 2.0 * sol.r_out);
      const EnergyBreakdown e =
          trial_energy_upper_bound(sol, eps, omega0, grid);
      const double gap = eps * eps * e.total - sol.energy;
      CHECK(gap > 0.0);
      CHECK(gap < prev_gap);
      // gap / (eps |log eps|) stays within a fixed band.
      CHECK(gap / (eps * std::abs(std::log(eps))) < 10.0);
      prev_gap = gap;
    }
  }
}

TEST_CASE("giant vortex trial") {
  const double s = 4.0, eps = 0.1, omega1 = 1.0, alpha = 0.3;
  const Grid xgrid = make_grid(192, 1.6);

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(giant_vortex_trial(1.0, eps, omega1, alpha, s, xgrid),
                    std::invalid_argument);
    CHECK_THROWS_AS(giant_vortex_trial(0.0, eps, omega1, alpha, s, xgrid),
                    std::invalid_argument);
  }

  SUBCASE("normalized with the prescribed winding") {
    const GiantVortexTrial gv =
        giant_vortex_trial(0.3, eps, omega1, alpha, s, xgrid);
    CHECK(std::abs(gv.state_x.norm() - 1.0) < 1e-12);
    const double omega = omega1 / std::pow(eps, 1.0 + alpha);
    CHECK(gv.winding == int(std::floor(0.5 * omega * gv.r_m * gv.r_m)));
    CHECK(field_winding(gv.state_x, 1.0) == gv.winding);
  }

  SUBCASE("bump normalization pi Int j = 1 and finite sqrt-gradient") {
    const double mass = integrate(
        [](double u) { return kPi * annulus_bump(u); }, -0.5, 0.5,
        {1e-13, 1e-13, 48});
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    const double grad2 = integrate(
        [](double u) {
          const double d = annulus_bump_sqrt_derivative(u);
          return d * d;
        },
        -0.5, 0.5, {1e-11, 1e-11, 48});
    CHECK(grad2 > 0.0);
    CHECK(grad2 < 1e3);
  }

  SUBCASE("energy component structure in xi") {
    // confinement - (1 - s/2) = O(xi^2); interaction = O(r_m^-(s+2)/xi);
    // kinetic = O(eps^2 r_m^-(s+2) / xi^2) + O(xi^2).
    const double r_m = tf::density_peak_radius(
        s, omega1 / std::pow(eps, alpha));
    const double rms = std::pow(r_m, -(s + 2.0));
    for (double xi : {0.4, 0.2}) {
      const GiantVortexTrial gv =
          giant_vortex_trial(xi, eps, omega1, alpha, s, xgrid);
      const RescaledEnergy re = gp_energy_rescaled(gv.state_x, s, r_m);
      CHECK(re.confinement - (1.0 - 0.5 * s) > 0.0);
      CHECK(re.confinement - (1.0 - 0.5 * s) < 2.0 * xi * xi);
      CHECK(re.interaction < 2.0 * rms / xi);
      CHECK(re.kinetic <
            40.0 * (eps * eps * rms / (xi * xi) + xi * xi));
      CHECK(re.total > 1.0 - 0.5 * s);  // confinement bound + positivity
    }
  }

  SUBCASE("optimal xi balances smoothing against azimuthal mismatch") {
    const double xi_opt = giant_vortex_optimal_xi(eps, alpha, s);
    CHECK(xi_opt ==
          doctest::Approx(std::pow(eps, 0.5 + alpha * (s + 2.0) /
                                              (2.0 * (s - 2.0))))
              .epsilon(1e-13));
    CHECK(xi_opt > 0.0);
    CHECK(xi_opt < 1.0);
  }
}

TEST_CASE("trial energy dominates the minimizer energy") {
  const double s = 4.0, omega0 = 4.0, eps = 0.1;
  const tf::Solution sol = tf::solve(s, omega0);
  const Grid grid = make_grid(128, 2.0 * sol.r_out);
  const TrialState trial = assemble_trial(sol, eps, omega0, grid);
  const TrapPotential V = TrapPotential::homogeneous(s);
  const EnergyBreakdown e_trial = gp_energy(trial.state, V);
  MinimizeOptions opt;
  opt.max_iterations = 1500;
  opt.energy_rtol = 1e-9;
  const MinimizeResult res = minimize_gp(trial.state, V, opt);
  CHECK(e_trial.total >= res.energy.total);
  CHECK(eps * eps * res.energy.total >= sol.energy - 1e-6);
}
