#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rotbec/gp.hpp"
#include "rotbec/quadrature.hpp"
#include "rotbec/tf.hpp"
#include "rotbec/trial.hpp"

using namespace rotbec;
constexpr double kPi = std::numbers::pi;

namespace {

GpState random_state(int n, double box, double eps, double omega,
                     unsigned seed) {
  GpState st = make_state(make_grid(n, box), eps, omega);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  for (auto& v : st.field) v = {d(rng), d(rng)};
  st.normalize();
  return st;
}

GpState gaussian_state(int n, double box, double eps, double omega) {
  GpState st = make_state(make_grid(n, box), eps, omega);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double r2 = st.grid.coord(ix) * st.grid.coord(ix) +
                        st.grid.coord(iy) * st.grid.coord(iy);
      st.field[st.grid.index(ix, iy)] = std::exp(-0.5 * r2);
    }
  st.normalize();
  return st;
}

}  // namespace

TEST_CASE("discrete gradient matches finite differences of the energy") {
  for (unsigned seed : {1u, 2u}) {
    GpState st = random_state(16, 1.5, 0.3, seed == 1u ? 0.0 : 3.0, seed);
    const GpCoeffs c = make_coeffs(st.grid, st.epsilon, st.omega,
                                   [](double r) { return std::pow(r, 4.0); });
    cvec px, py, grad;
    kernels::gauge_derivatives(c, st.field, px, py, Exec::Serial);
    kernels::gradient(c, st.field, px, py, grad, Exec::Serial);

    const double h2 = st.grid.spacing() * st.grid.spacing();
    std::mt19937_64 rng(seed + 100);
    std::uniform_int_distribution<std::size_t> pick(0, st.field.size() - 1);
    const double delta = 1e-6;
    for (int probe = 0; probe < 25; ++probe) {
      const std::size_t k = pick(rng);
      for (int comp = 0; comp < 2; ++comp) {
        auto perturbed = [&](double sign) {
          cvec f = st.field;
          f[k] += (comp == 0) ? std::complex<double>(sign * delta, 0.0)
                              : std::complex<double>(0.0, sign * delta);
          return kernels::energy(c, f, Exec::Serial).total;
        };
        const double fd = (perturbed(1.0) - perturbed(-1.0)) / (2.0 * delta);
        const double an = 2.0 * h2 *
                          (comp == 0 ? grad[k].real() : grad[k].imag());
        CHECK(std::abs(fd - an) / std::max(1.0, std::abs(an)) < 1e-6);
      }
    }
  }
}

TEST_CASE("gauge and angular-momentum energy forms agree") {
  // The two discretizations coincide in the continuum; on a smooth state
  // their difference is pure discretization error and shrinks like h^2.
  auto smooth_vortex = [](int n, double box) {
    GpState st = make_state(make_grid(n, box), 0.5, 3.0);
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double x = st.grid.coord(ix), y = st.grid.coord(iy);
        const std::complex<double> zeta(x, y);
        st.field[st.grid.index(ix, iy)] =
            zeta * zeta * std::exp(-0.5 * (x * x + y * y));
      }
    st.normalize();
    return st;
  };
  const TrapPotential V = TrapPotential::homogeneous(4.0);
  double diff[2];
  int idx = 0;
  for (int n : {128, 256}) {
    const GpState st = smooth_vortex(n, 6.0);
    const EnergyBreakdown mag = gp_energy(st, V);
    const double ang = gp_energy_angular(st, V);
    diff[idx] = std::abs(mag.total - ang) / std::abs(mag.total);
    CHECK(diff[idx] < 2e-3);
    ++idx;
  }
  CHECK(diff[1] < 0.35 * diff[0]);  // ~4x reduction per h halving
}

TEST_CASE("no rotation: kinetic term reduces to the plain gradient") {
  // For the normalized Gaussian exp(-r^2/2)/sqrt(pi), Int |grad psi|^2 = 1.
  const GpState st = gaussian_state(256, 8.0, 0.5, 0.0);
  const TrapPotential V = TrapPotential::homogeneous(4.0);
  const EnergyBreakdown e = gp_energy(st, V);
  CHECK(e.centrifugal == 0.0);
  CHECK(e.magnetic_kinetic == doctest::Approx(1.0).epsilon(5e-4));
  const double ang = gp_energy_angular(st, V);
  CHECK(e.total == doctest::Approx(ang).epsilon(1e-3));
}

TEST_CASE("grid energy converges to the dense-quadrature oracle") {
  // Normalized Gaussian psi = exp(-r^2/2)/sqrt(pi), omega = 2, eps = 0.5.
  // Radial oracle at tolerance 1e-12; the centered-difference energy is
  // second order in h, so Richardson extrapolation of three grids must land
  // on the oracle to 1e-6 relative.
  const double eps = 0.5, omega = 2.0;
  const double inv_eps2 = 1.0 / (eps * eps);
  // |grad psi|^2 = r^2 e^{-r^2}/pi; A^2|psi|^2 = (omega^2 r^2/4) e^{-r^2}/pi
  // (real psi has no paramagnetic term).
  auto kin = [&](double r) {
    return 2.0 * kPi * r *
           (r * r * std::exp(-r * r) / kPi +
            0.25 * omega * omega * r * r * std::exp(-r * r) / kPi);
  };
  auto pot = [&](double r) {
    return 2.0 * kPi * r * std::pow(r, 4.0) * inv_eps2 * std::exp(-r * r) /
           kPi;
  };
  auto inter = [&](double r) {
    return 2.0 * kPi * r * inv_eps2 * std::exp(-2.0 * r * r) / (kPi * kPi);
  };
  auto cent = [&](double r) {
    return -2.0 * kPi * r * 0.25 * omega * omega * r * r *
           std::exp(-r * r) / kPi;
  };
  const QuadOptions q{1e-12, 1e-12, 48, 2, 4096};
  const double oracle = integrate(kin, 0.0, 9.0, q) +
                        integrate(pot, 0.0, 9.0, q) +
                        integrate(inter, 0.0, 9.0, q) +
                        integrate(cent, 0.0, 9.0, q);

  const TrapPotential V = TrapPotential::homogeneous(4.0);
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;  // n, 2n/ sqrt ratios for Richardson
  const double box = 9.0;
  e1 = gp_energy(gaussian_state(128, box, eps, omega), V).total;
  e2 = gp_energy(gaussian_state(256, box, eps, omega), V).total;
  e3 = gp_energy(gaussian_state(512, box, eps, omega), V).total;

  // Raw coarse value is within the O(h^2) band.
  CHECK(std::abs(e3 - oracle) / std::abs(oracle) < 2e-4);
  // h-halving cuts the error by ~4; extrapolate twice.
  const double r1 = (4.0 * e2 - e1) / 3.0;
  const double r2 = (4.0 * e3 - e2) / 3.0;
  const double rich = (16.0 * r2 - r1) / 15.0;
  CHECK(std::abs(rich - oracle) / std::abs(oracle) < 1e-6);
}

TEST_CASE("minimization without rotation approaches the TF energy") {
  const double eps = 0.1, s = 4.0;
  const tf::Solution tf_star = tf::solve(s, 0.0);
  const Grid grid = make_grid(128, 2.0 * tf_star.r_out);
  GpState init = make_state(grid, eps, 0.0);
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix) {
      const double r = std::hypot(grid.coord(ix), grid.coord(iy));
      init.field[grid.index(ix, iy)] = std::sqrt(tf_star.density(r));
    }
  MinimizeOptions opt;
  opt.max_iterations = 6000;
  const MinimizeResult res =
      minimize_gp(std::move(init), TrapPotential::homogeneous(s), opt);
  CHECK(res.status == MinimizeStatus::Converged);
  const double gap = eps * eps * res.energy.total - tf_star.energy;
  CHECK(gap > 0.0);
  CHECK(gap / std::pow(eps, 2.0 / 3.0) < 1.0);
  CHECK(res.norm_drift < 1e-12);

  SUBCASE("chemical potential identity and residual") {
    const double mu = chemical_potential(res.energy);
    CHECK(mu >= res.energy.total);  // interaction is nonnegative
    const double resid =
        variational_residual(res.state, TrapPotential::homogeneous(s));
    CHECK(resid < 1e-3 * std::abs(mu));
  }

  SUBCASE("tail diagnostics on the TF-seeded state") {
    GpState seeded = make_state(grid, eps, 0.0);
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix) {
        const double r = std::hypot(grid.coord(ix), grid.coord(iy));
        seeded.field[grid.index(ix, iy)] = std::sqrt(tf_star.density(r));
      }
    seeded.normalize();
    const TailDiagnostics t = tail_diagnostics(seeded, tf_star);
    CHECK(t.outside_mass4 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(t.max_density_in.has_value());
  }
}

TEST_CASE("rotating minimization obeys the TF lower bound and sandwich") {
  const double eps = 0.1, omega0 = 4.0, s = 4.0;
  const tf::Solution tf_sol = tf::solve(s, omega0);
  const Grid grid = make_grid(128, 2.0 * tf_sol.r_out);
  const TrialState trial = assemble_trial(tf_sol, eps, omega0, grid);
  const TrapPotential V = TrapPotential::homogeneous(s);
  const EnergyBreakdown e_trial = gp_energy(trial.state, V);

  MinimizeOptions opt;
  opt.max_iterations = 4000;
  opt.energy_rtol = 1e-9;
  const MinimizeResult res = minimize_gp(trial.state, V, opt);

  const double e2 = eps * eps;
  CHECK(e2 * res.energy.total >= tf_sol.energy - 1e-6);
  CHECK(res.energy.total <= e_trial.total + 1e-9);

  SUBCASE("monotone descent was maintained") {
    CHECK(res.backtracks >= 0);
    CHECK(res.norm_drift < 1e-12);
  }

  SUBCASE("angular inequality holds pointwise") {
    CHECK(angular_inequality_violation(res.state) <= 1e-10);
  }

  SUBCASE("rotating the state by 90 degrees leaves the energy unchanged") {
    GpState rot = res.state;
    const int n = grid.n;
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        rot.field[grid.index(ix, iy)] =
            res.state.field[grid.index(iy, n - 1 - ix)];
    const EnergyBreakdown er = gp_energy(rot, V);
    CHECK(er.total == doctest::Approx(res.energy.total).epsilon(1e-12));
  }

  SUBCASE("rotating by an arbitrary angle changes the energy only at the "
          "interpolation level") {
    const double c = std::cos(0.5), sn = std::sin(0.5);
    GpState rot = res.state;
    const int n = grid.n;
    const double h = grid.spacing();
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double x = grid.coord(ix), y = grid.coord(iy);
        const double xs = c * x + sn * y, ys = -sn * x + c * y;
        const double u = (xs + grid.box_radius) / h - 0.5;
        const double v = (ys + grid.box_radius) / h - 0.5;
        const int i = std::clamp(int(std::floor(u)), 0, n - 2);
        const int j = std::clamp(int(std::floor(v)), 0, n - 2);
        const double fu = std::clamp(u - i, 0.0, 1.0);
        const double fv = std::clamp(v - j, 0.0, 1.0);
        rot.field[grid.index(ix, iy)] =
            (1 - fu) * (1 - fv) * res.state.field[grid.index(i, j)] +
            fu * (1 - fv) * res.state.field[grid.index(i + 1, j)] +
            (1 - fu) * fv * res.state.field[grid.index(i, j + 1)] +
            fu * fv * res.state.field[grid.index(i + 1, j + 1)];
      }
    rot.normalize();
    const EnergyBreakdown er = gp_energy(rot, V);
    CHECK(std::abs(er.total - res.energy.total) /
              std::abs(res.energy.total) <
          0.05);
  }

  SUBCASE("chemical potential obeys the square-root-log bound") {
    const double mu_gap =
        eps * eps * chemical_potential(res.energy) - tf_sol.mu;
    CHECK(mu_gap > 0.0);
    CHECK(mu_gap / std::sqrt(eps * std::abs(std::log(eps))) < 2.0);
  }

  SUBCASE("density distance to TF is small for the converged state") {
    const double d = density_l2_distance(res.state, tf_sol);
    CHECK(d < 1.0);
    CHECK(d > 0.0);
  }

  SUBCASE("tails outside the support are small") {
    const TailDiagnostics t = tail_diagnostics(res.state, tf_sol);
    CHECK(t.outside_mass4 < 0.05);
    CHECK(t.max_density_out < 0.05);
    REQUIRE(t.max_density_in.has_value());
    CHECK(*t.max_density_in < 0.05);
  }
}

TEST_CASE("rescaled energy breakdown matches the unscaled functional") {
  // For a state on the x-grid, the rescaled total must be
  // eps^2 r_m^-s times the unscaled energy of the mapped state.
  const double s = 4.0, eps = 0.1, omega1 = 1.0, alpha = 0.3;
  const double omega = omega1 / std::pow(eps, 1.0 + alpha);
  const double r_m = tf::density_peak_radius(s, eps * omega);
  const Grid xgrid = make_grid(96, 1.6);
  const GiantVortexTrial gv =
      giant_vortex_trial(0.3, eps, omega1, alpha, s, xgrid);
  const RescaledEnergy re = gp_energy_rescaled(gv.state_x, s, r_m);

  // Map psi(r) = psi_x(r/r_m)/r_m onto the physical grid (same node layout
  // scaled by r_m) and evaluate the plain functional there.
  GpState phys = make_state(make_grid(xgrid.n, xgrid.box_radius * r_m), eps,
                            omega);
  for (std::size_t k = 0; k < phys.field.size(); ++k)
    phys.field[k] = gv.state_x.field[k] / r_m;
  const EnergyBreakdown e = gp_energy(
      phys, [](double r) { return std::pow(r, 4.0); });
  CHECK(re.total ==
        doctest::Approx(eps * eps * std::pow(r_m, -s) * e.total)
            .epsilon(1e-10));
}
