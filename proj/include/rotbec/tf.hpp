#pragma once

#include <functional>
#include <vector>

namespace rotbec::tf {

// Thomas-Fermi ground state of the trap r^s (s > 2) rotating at scaled
// angular velocity omega0. The density is
//   rho(r) = (1/2) [mu - r^s + omega0^2 r^2 / 4]_+,
// supported on [r_in, r_out] with r_in = 0 below the critical velocity.
struct Solution {
  double s = 0.0;
  double omega0 = 0.0;
  double mu = 0.0;
  double r_in = 0.0;
  double r_out = 0.0;
  double energy = 0.0;

  double density(double r) const;
  bool has_hole() const { return r_in > 0.0; }
};

// Scaled description for fast rotation: lengths in units of the density-peak
// radius r_m = (omega0^2/(2s))^(1/(s-2)), chemical potential and energy
// divided by r_m^s.
struct ScaledSolution {
  double s = 0.0;
  double omega0 = 0.0;
  double x_in = 0.0;
  double x_out = 0.0;
  double mu_tilde = 0.0;
  double energy_tilde = 0.0;
  double r_m = 0.0;

  double density(double x) const;  // scaled density rho_tilde(x)
};

struct Critical {
  double omega_c = 0.0;   // rotation at which a central hole opens
  double r_out_c = 0.0;   // outer radius at that rotation
};

// Radius of maximal density, (omega0^2/(2s))^(1/(s-2)). Requires omega0 > 0.
double density_peak_radius(double s, double omega0);

// omega_c = 2 [4(s+2)/(pi(s-2))]^((s-2)/(2(s+2))), r_out_c = (omega_c/2)^(2/(s-2)).
// Throws std::invalid_argument for s <= 2.
Critical critical_velocity(double s);

// Solves the normalization condition for mu (the mass is strictly increasing
// in mu) and the support radii. Throws std::invalid_argument for s <= 2 or
// omega0 < 0. Energy is computed by quadrature via E = mu - ||rho||_2^2.
Solution solve(double s, double omega0);

// Quartic trap s = 4: explicit closed forms for mu and the radii on both
// sides of omega_c; the energy is still computed by quadrature.
Solution quartic_closed_form(double omega0);

// Direct solve in the scaled frame; accurate at large omega0 where the
// unscaled quantities overflow double cancellation budgets.
ScaledSolution scaled_solve(double s, double omega0);

// Rescaling of an unscaled solution (cross-check route).
ScaledSolution scaled_from(const Solution& sol);

// Leading-order half-width of the scaled support annulus around x = 1:
// delta = (3/(s(s-2)))^(1/3) (omega0^2/(2s))^(-(s+2)/(3(s-2))).
double hole_width_delta(double s, double omega0);

// h(x) = x^s - (s/2) x^2 + s/2 - 1, evaluated cancellation-free near x = 1;
// h >= 0 with the only zero at x = 1. h(x_in) = h(x_out) for the scaled radii.
double h_shape(double s, double x);
double h_shape_derivative(double s, double x);

// TF energy of an arbitrary radial density profile on [0, r_max]:
//   2 pi Int r [ rho (r^s + rho) - omega0^2 r^2 rho / 4 ] dr.
// Support edges of rho strictly inside (0, r_max) should be passed as
// breakpoints so the quadrature does not step over them.
// Throws std::invalid_argument if the mass deviates from 1 by more than 1e-6.
double functional_value(const std::function<double(double)>& rho, double r_max,
                        double s, double omega0,
                        std::initializer_list<double> breakpoints = {});

// Mass of a solution's density by quadrature (diagnostic; ~1 at solve tol).
double mass(const Solution& sol);

// ||rho||_2^2 by quadrature.
double norm2_squared(const Solution& sol);

// Energy by direct quadrature of the functional (the identity route is
// E = mu - ||rho||_2^2; both must agree).
double energy_by_quadrature(const Solution& sol);

// Analytic d(mu)/dt at t = omega0^2/4: -r_out^2/2 without a hole,
// -(r_out^2 + r_in^2)/2 with one.
double dmu_dt_identity(const Solution& sol);

}  // namespace rotbec::tf
