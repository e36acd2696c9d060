#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "rotbec/gp_state.hpp"
#include "rotbec/kernels.hpp"
#include "rotbec/tf.hpp"

namespace rotbec {

// rho_eps = j_eps * rho_tf with the exponential mollifier
// j_eps(r) = exp(-r/eps) / (2 pi eps^2); radially evaluated by nested
// quadrature and cached on a dense radial table for grid sampling.
class RegularizedDensity {
 public:
  RegularizedDensity(const tf::Solution& tf_sol, double epsilon);

  double operator()(double r) const;      // interpolated table lookup
  double evaluate_exact(double r) const;  // nested quadrature
  double mass() const;                    // quadrature of the exact evaluator
  double max_value() const;
  double r_max() const { return r_max_; }
  double epsilon() const { return eps_; }

 private:
  tf::Solution tf_;
  double eps_;
  double r_max_;
  double dr_;
  std::vector<double> table_;
};

// Square vortex lattice with spacing delta sqrt(eps), clipped to the disk of
// radius 2 r_out - 2 sqrt(2) l_eps. Sites carry unit phase winding; the
// cutoff vanishes linearly within eps^eta of each site.
struct VortexLattice {
  double spacing = 0.0;      // l_eps
  double delta = 0.0;
  double eta = 3.0;
  double epsilon = 0.0;
  double clip_radius = 0.0;
  std::vector<std::array<double, 2>> sites;

  double cutoff_radius() const;  // eps^eta
  std::size_t count() const { return sites.size(); }
};

// delta defaults to sqrt(2 pi / omega0). Throws if l_eps >= r_out.
VortexLattice build_vortex_lattice(double omega0, double epsilon,
                                   double r_out, double delta = 0.0,
                                   double eta = 3.0);

// Unit-modulus product phase and the linear cutoff at a point. At an exact
// lattice site the phase is undefined; returns (1, 0) so the cutoff kills
// the value.
std::pair<std::complex<double>, double> phase_and_cutoff(
    const VortexLattice& lattice, double x, double y);

// Winding number of the lattice phase around a circle, by adaptive phase
// unwrapping.
int phase_winding(const VortexLattice& lattice, double cx, double cy,
                  double radius);

// Winding of an arbitrary grid field around a centered circle, unwrapping
// the interpolated phase.
int field_winding(const GpState& state, double radius);

struct TrialState {
  GpState state;          // discretely normalized
  double c_eps_sq = 1.0;  // continuum normalization constant squared
  VortexLattice lattice;
  double smoothing_eps = 0.0;
};

// Vortex-lattice trial state c_eps sqrt(rho_eps) chi g on the grid.
// omega0 == 0 builds the real state sqrt(rho_eps).
TrialState assemble_trial(const tf::Solution& tf_sol, double epsilon,
                          double omega0, const Grid& grid, double delta = 0.0,
                          double eta = 3.0);

// Energy of the assembled trial in the gauge form at omega = omega0/eps;
// an upper bound for the minimizer energy at the same parameters.
EnergyBreakdown trial_energy_upper_bound(const tf::Solution& tf_sol,
                                         double epsilon, double omega0,
                                         const Grid& grid, double delta = 0.0,
                                         double eta = 3.0);

// Smooth bump supported in [-1/2, 1/2], normalized so pi Int j = 1.
double annulus_bump(double u);
double annulus_bump_sqrt_derivative(double u);

struct GiantVortexTrial {
  GpState state_x;   // on the peak-radius-rescaled grid
  int winding = 0;   // floor(omega r_m^2 / 2)
  double xi = 0.0;
  double r_m = 0.0;
  double omega0 = 0.0;
};

// Annular trial state sqrt(rho_xi(x)) exp(i k theta) with
// rho_xi(x) = j(xi^-1 (1 - x^2))/xi and k = floor(omega r_m^2/2);
// omega = omega1 / eps^(1+alpha). Throws for xi outside (0, 1).
GiantVortexTrial giant_vortex_trial(double xi, double epsilon, double omega1,
                                    double alpha, double s, const Grid& grid);

// xi balancing the trial's smoothing and kinetic remainders for large alpha:
// sqrt(eps) * eps^(alpha (s+2) / (2 (s-2))).
double giant_vortex_optimal_xi(double epsilon, double alpha, double s);

}  // namespace rotbec
